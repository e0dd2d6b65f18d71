//! Linkage combinatorics under a specialization: the induced reflection
//! group, walk-orbit equivalence via factor divisibility, linkage classes of
//! weights, and predicted standard-module homomorphisms.

use crate::ring::{vanishes_under, LaurentPoly, Specialization};
use crate::walks::{
    growth_sequences, hyperplane_closure, lambda_of_walk, multipartitions, one_row_weights,
    sorted_walk, walk_orbit, word_dominance, Hyperplane, Multipartition, Walk, WalksError,
};

/// Errors from linkage computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkageError {
    /// Orbit comparison requires equal walk lengths.
    #[error("walks have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
    /// Propagated walk-combinatorics error.
    #[error(transparent)]
    Walks(#[from] WalksError),
}

/// The factor `λ_i − q^{−2x}·λ_j` attached to the hyperplane `(i,j;x)`.
pub fn hyperplane_factor(h: &Hyperplane, d: usize) -> LaurentPoly {
    LaurentPoly::lambda(d, h.i)
        .sub(&LaurentPoly::q_pow(d, -2 * h.x).mul(&LaurentPoly::lambda(d, h.j)))
}

/// The reflection group induced by a specialization: the hyperplanes whose
/// factors vanish, together with the factor set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedGroup {
    /// Number of λ parameters.
    pub d: usize,
    /// Order of `q` under the specialization (0 = generic). When `q` is a
    /// root of unity the generator set is periodic in `x` with this period;
    /// the stored set is the fundamental window `|x| ≤ bound`.
    pub l: u32,
    /// Offset window the generators were enumerated over.
    pub bound: i64,
    /// Vanishing hyperplanes `(i,j;x)` with `i < j` and `|x| ≤ bound`.
    pub generators: Vec<Hyperplane>,
    /// The factors `λ_i − q^{−2x}λ_j` of the generators.
    pub factor_set: Vec<LaurentPoly>,
}

impl InducedGroup {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// All hyperplanes of the generated group with offsets reachable by
    /// walks of length `n`, with their factors.
    pub fn closed_factors(&self, n: usize) -> Vec<(Hyperplane, LaurentPoly)> {
        let gmax = self.generators.iter().map(|h| h.x.abs()).max().unwrap_or(0);
        hyperplane_closure(&self.generators, n as i64 + gmax)
            .into_iter()
            .map(|h| {
                let f = hyperplane_factor(&h, self.d);
                (h, f)
            })
            .collect()
    }
}

/// Enumerate the generators of the reflection group induced by `k`: every
/// `(i,j;x)` with `i < j`, `|x| ≤ bound`, whose factor vanishes under `k`.
/// (The mirror triple `(j,i;−x)` has a unit-multiple factor and is omitted.)
/// Admissibility (`λ_i = λ_j ⇒ i = j`) is an invariant of
/// [`Specialization`] itself.
pub fn induced_group(k: &Specialization, bound: i64) -> InducedGroup {
    let d = k.num_lambdas();
    let mut generators = Vec::new();
    let mut factor_set = Vec::new();
    for i in 1..=d {
        for j in (i + 1)..=d {
            for x in -bound..=bound {
                let h = Hyperplane::new(i, j, x);
                let f = hyperplane_factor(&h, d);
                if vanishes_under(&f, k) {
                    generators.push(h);
                    factor_set.push(f);
                }
            }
        }
    }
    InducedGroup { d, l: k.order(), bound, generators, factor_set }
}

/// Entry polynomial `λ_c·q^e` of an eigenvalue-sequence step.
fn step_poly(c: usize, e: i64, d: usize) -> LaurentPoly {
    LaurentPoly::lambda(d, c).mul(&LaurentPoly::q_pow(d, e))
}

/// Whether two eigenvalue sequences differ, entrywise, by multiples of the
/// given factors (zero entries are exempt).
fn sequences_linked(
    a: &[(usize, i64)],
    b: &[(usize, i64)],
    factors: &[(Hyperplane, LaurentPoly)],
    d: usize,
) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(&(ca, ea), &(cb, eb))| {
        let diff = step_poly(ca, ea, d).sub(&step_poly(cb, eb, d));
        diff.is_zero() || factors.iter().any(|(_, f)| diff.checked_div(f).is_ok())
    })
}

/// Divisibility test for walk-orbit equivalence: `w ∼ w'` under `G` iff
/// every nonzero entry of `λ^w − λ^{w'}` is divisible by a factor of the
/// generated group.
pub fn same_walk_orbit(w: &Walk, w2: &Walk, g: &InducedGroup) -> Result<bool, LinkageError> {
    if w.len() != w2.len() {
        return Err(LinkageError::LengthMismatch(w.len(), w2.len()));
    }
    same_walk_orbit_with_factors(w, w2, &g.closed_factors(w.len()), g.d)
}

/// As [`same_walk_orbit`], against a precomputed closed factor set — use
/// this when comparing many pairs so the hyperplane closure is built once.
pub fn same_walk_orbit_with_factors(
    w: &Walk,
    w2: &Walk,
    factors: &[(Hyperplane, LaurentPoly)],
    d: usize,
) -> Result<bool, LinkageError> {
    if w.len() != w2.len() {
        return Err(LinkageError::LengthMismatch(w.len(), w2.len()));
    }
    if w == w2 {
        return Ok(true);
    }
    let a = lambda_of_walk(w);
    let b = lambda_of_walk(w2);
    Ok(sequences_linked(&a.entries, &b.entries, factors, d))
}

/// Partition of all `d`-multipartitions of `n` into linkage classes under
/// `k`: weights `μ, ν` are linked when some growth sequences of `μ` and `ν`
/// are divisibility-equivalent, then the relation is closed transitively.
/// Weights in distinct classes have hom-orthogonal standard modules.
pub fn linkage_classes(n: u64, d: usize, k: &Specialization) -> Vec<Vec<Multipartition>> {
    let weights = multipartitions(n, d);
    let g = induced_group(k, n as i64 + 1);
    let factors = g.closed_factors(n as usize);
    let seqs: Vec<Vec<Vec<(usize, i64)>>> =
        weights.iter().map(|mu| growth_sequences(mu, d)).collect();
    // Union-find over weight indices.
    let mut parent: Vec<usize> = (0..weights.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = i;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for i in 0..weights.len() {
        for j in (i + 1)..weights.len() {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let linked = seqs[i].iter().any(|a| {
                seqs[j].iter().any(|b| sequences_linked(a, b, &factors, d))
            });
            if linked {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<Multipartition>> =
        std::collections::BTreeMap::new();
    for (i, mu) in weights.into_iter().enumerate() {
        classes.entry(find(&mut parent, i)).or_default().push(mu);
    }
    classes.into_values().collect()
}

/// All direct walks with endpoint `μ` (one-row): each direction's steps are
/// taken consecutively, so the walks are the orderings of the nonempty
/// components.
pub fn direct_walks(mu: &Multipartition) -> Result<Vec<Walk>, LinkageError> {
    // Start from the sorted walk (validates one-row), then permute blocks.
    let _ = sorted_walk(mu)?;
    let deg = mu.degree_vector();
    let nonempty: Vec<usize> = (0..deg.len()).filter(|&i| deg[i] > 0).collect();
    let mut out = Vec::new();
    let mut order: Vec<usize> = nonempty.clone();
    permute(&mut order, 0, &mut |ord| {
        let mut word = Vec::new();
        for &c in ord.iter() {
            word.extend(std::iter::repeat(c + 1).take(deg[c] as usize));
        }
        out.push(Walk::new(word));
    });
    out.sort();
    out.dedup();
    Ok(out)
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

/// The scalar `κ_ν` with `𝐞_u·𝐞_v = κ_ν·𝐞_u` for direct walks `u ≥ v`,
/// where `𝐞_v` is the integral q-symmetrizer of the Young subalgebra of
/// `v`'s composition: evaluating the symmetrizer at its own one-dimensional
/// representation gives the product of the Poincaré polynomials
/// `Σ_{σ∈S_k} q^{2ℓ(σ)} = ∏_{j≤k}(1+q²+…+q^{2(j−1)})` over the block sizes
/// `k` of `ν`. It is independent of `μ` and of the block order.
pub fn kappa(nu: &Multipartition, d: usize) -> Result<LaurentPoly, LinkageError> {
    let _ = sorted_walk(nu)?;
    let mut acc = LaurentPoly::one(d);
    for &k in &nu.degree_vector() {
        for j in 1..=k {
            let mut block = LaurentPoly::zero(d);
            for t in 0..j {
                block = block.add(&LaurentPoly::q_pow(d, 2 * t as i64));
            }
            acc = acc.mul(&block);
        }
    }
    Ok(acc)
}

/// A predicted standard-module embedding `Δ_μ ↪ Δ_ν`, witnessed by a pair
/// of direct walks in the same induced orbit with nested direction changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictedHom {
    pub mu: Multipartition,
    pub nu: Multipartition,
    /// The direct-walk witness `(u, v)` with `u ∼ v` and `u ≥ v`.
    pub witness: (Walk, Walk),
    /// The scalar `κ_ν` over the generic ring.
    pub kappa: LaurentPoly,
}

/// All ordered pairs `(μ, ν)` of one-row weights of degree `n` admitting
/// direct walks `u ∈ T_μ`, `v ∈ T_ν` with `u ∼ v` under `k`, every
/// direction change of `u` also a change of `v`, `μ ≠ ν`, and `κ_ν`
/// nonvanishing under `k`; each pair predicts `Δ_μ ↪ Δ_ν`.
pub fn predicted_homs(
    n: u64,
    d: usize,
    k: &Specialization,
) -> Result<Vec<PredictedHom>, LinkageError> {
    let g = induced_group(k, n as i64 + 1);
    let factors = g.closed_factors(n as usize);
    let weights = one_row_weights(n, d);
    let mut out = Vec::new();
    for mu in &weights {
        for nu in &weights {
            if mu == nu {
                continue;
            }
            let kv = kappa(nu, d)?;
            if vanishes_under(&kv, k) {
                continue;
            }
            let mut witness = None;
            'search: for u in direct_walks(mu)? {
                for v in direct_walks(nu)? {
                    if word_dominance(&u, &v)
                        && same_walk_orbit_with_factors(&u, &v, &factors, g.d)?
                    {
                        witness = Some((u, v));
                        break 'search;
                    }
                }
            }
            if let Some(witness) = witness {
                out.push(PredictedHom { mu: mu.clone(), nu: nu.clone(), witness, kappa: kv });
            }
        }
    }
    Ok(out)
}

/// Brute-force orbit membership through explicit reflections, for
/// cross-validation against the divisibility criterion.
pub fn in_explicit_orbit(w: &Walk, w2: &Walk, g: &InducedGroup) -> bool {
    walk_orbit(w, &g.generators).contains(w2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingError;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(a: i64) -> BigRational {
        BigRational::from(BigInt::from(a))
    }

    /// λ₂ = q²λ₁ with generic q (the singly-critical d=2 case).
    fn d2_critical() -> Specialization {
        Specialization::new(0, vec![(rat(1), 0), (rat(1), 2)]).unwrap()
    }

    /// λ₂ = q⁻²λ₁, λ₃ = q⁻⁴λ₁ with generic q.
    fn d3_case() -> Specialization {
        Specialization::new(0, vec![(rat(1), 0), (rat(1), -2), (rat(1), -4)]).unwrap()
    }

    #[test]
    fn induced_group_examples() {
        // Generic parameters induce the trivial group.
        assert!(induced_group(&Specialization::generic(3), 6).is_trivial());
        // λ₂ = q²λ₁: the unique generator in canonical form is (1,2;1) with
        // factor λ₁ − q⁻²λ₂.
        let g = induced_group(&d2_critical(), 6);
        assert_eq!(g.generators, vec![Hyperplane::new(1, 2, 1)]);
        assert_eq!(
            g.factor_set[0],
            hyperplane_factor(&Hyperplane::new(1, 2, 1), 2)
        );
        // λ₂ = q⁻²λ₁, λ₃ = q⁻⁴λ₁: exactly three hyperplane families.
        let g3 = induced_group(&d3_case(), 6);
        assert_eq!(
            g3.generators,
            vec![
                Hyperplane::new(1, 2, -1),
                Hyperplane::new(1, 3, -2),
                Hyperplane::new(2, 3, -1)
            ]
        );
    }

    #[test]
    fn induced_group_rejects_inadmissible() {
        // λ₁ = λ₂ is rejected at specialization construction time.
        let err = Specialization::new(0, vec![(rat(2), 0), (rat(2), 0)]);
        assert!(matches!(err, Err(RingError::InadmissibleSpecialization(_))));
    }

    #[test]
    fn factor_set_closure_is_additive() {
        // (i,j;x)∘(j,k;y) = (i,k;x+y), and the composite factor is the sum
        // of the factors up to unit multiples:
        // (λ_i − q^{−2x}λ_j) + q^{−2x}(λ_j − q^{−2y}λ_k) = λ_i − q^{−2(x+y)}λ_k.
        let d = 3;
        for (x, y) in [(1i64, 2i64), (-1, 3), (0, -2)] {
            let f_ij = hyperplane_factor(&Hyperplane::new(1, 2, x), d);
            let f_jk = hyperplane_factor(&Hyperplane::new(2, 3, y), d);
            let f_ik = hyperplane_factor(&Hyperplane::new(1, 3, x + y), d);
            let sum = f_ij.add(&LaurentPoly::q_pow(d, -2 * x).mul(&f_jk));
            assert_eq!(sum, f_ik);
        }
    }

    #[test]
    fn same_walk_orbit_printed_example() {
        // λ^{333} − λ^{321} = (0, q²(λ₃ − q⁻²λ₂), q⁴(λ₃ − q⁻⁴λ₁)): linked
        // exactly when both factors belong to the group.
        let g = induced_group(&d3_case(), 6);
        let w333 = Walk::parse("333");
        let w321 = Walk::parse("321");
        assert!(same_walk_orbit(&w333, &w321, &g).unwrap());
        assert!(in_explicit_orbit(&w333, &w321, &g));
        // Reflexivity and the trivial group.
        assert!(same_walk_orbit(&w321, &w321, &g).unwrap());
        let trivial = induced_group(&Specialization::generic(3), 6);
        assert!(!same_walk_orbit(&w333, &w321, &trivial).unwrap());
        assert!(matches!(
            same_walk_orbit(&w333, &Walk::parse("33"), &g),
            Err(LinkageError::LengthMismatch(3, 2))
        ));
    }

    #[test]
    fn divisibility_matches_explicit_orbits() {
        // Exhaustive cross-validation on short walks for several
        // specializations (the acceptance run extends the lengths).
        let specs = vec![
            Specialization::generic(3),
            d3_case(),
            Specialization::new(0, vec![(rat(1), 0), (rat(1), 2), (rat(5), 0)]).unwrap(),
            Specialization::new(5, vec![(rat(1), 0), (rat(1), 2), (rat(1), 4)]).unwrap(),
        ];
        for k in &specs {
            let g = induced_group(k, 5);
            for len in 1..=4usize {
                let factors = g.closed_factors(len);
                let mut walks = Vec::new();
                let mut stack = vec![Vec::new()];
                while let Some(w) = stack.pop() {
                    if w.len() == len {
                        walks.push(Walk::new(w));
                        continue;
                    }
                    for c in 1..=3 {
                        let mut v = w.clone();
                        v.push(c);
                        stack.push(v);
                    }
                }
                for a in &walks {
                    let orbit = walk_orbit(a, &g.generators);
                    for b in &walks {
                        assert_eq!(
                            same_walk_orbit_with_factors(a, b, &factors, g.d).unwrap(),
                            orbit.contains(b),
                            "mismatch for {a:?} vs {b:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn linkage_classes_generic_and_critical() {
        // Generic k: all singletons.
        let classes = linkage_classes(2, 2, &Specialization::generic(2));
        assert!(classes.iter().all(|c| c.len() == 1));
        assert_eq!(classes.len(), 5);
        // λ₂ = q²λ₁ at n = 2 links ((2),), ((1),(1)), (,(1²)).
        let classes = linkage_classes(2, 2, &d2_critical());
        let linked = classes
            .iter()
            .find(|c| c.contains(&Multipartition::new(vec![vec![2], vec![]])))
            .expect("class of ((2),)");
        let mut expected = vec![
            Multipartition::new(vec![vec![2], vec![]]),
            Multipartition::new(vec![vec![1], vec![1]]),
            Multipartition::new(vec![vec![], vec![1, 1]]),
        ];
        expected.sort();
        let mut got = linked.clone();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn linkage_classes_match_alcove_point_orbits() {
        // d = 2 with q of order l and λ₂ = q^{2m}λ₁: one-row weights,
        // projected to ℤ, must fall into the rank-1 affine point orbits.
        use crate::alcove::AlcoveComplex;
        use crate::walks::project_weight;
        let (l, m, n) = (3i64, 1i64, 4u64);
        let k = Specialization::new(l as u32, vec![(rat(1), 0), (rat(1), -2 * m)]).unwrap();
        let complex = AlcoveComplex::build_rank1(l, m, 40).unwrap();
        let classes = linkage_classes(n, 2, &k);
        for class in &classes {
            let points: Vec<i64> = class
                .iter()
                .filter(|mu| mu.is_one_row())
                .map(|mu| project_weight(mu).unwrap()[0])
                .collect();
            for &p in &points {
                let orbit = complex.weight_orbit(p, n as i64 + 2 * l);
                for &q in &points {
                    assert!(orbit.contains(&q), "points {p} and {q} linked but not in orbit");
                }
            }
        }
        // Conversely, one-row weights in one point orbit are linked.
        let one_row: Vec<i64> = (0..=n as i64).map(|t| -(n as i64) + 2 * t).collect();
        for &p in &one_row {
            for &q in &one_row {
                let same_orbit = complex.weight_orbit(p, n as i64 + 2 * l).contains(&q);
                let cp = classes.iter().position(|c| {
                    c.iter().any(|mu| mu.is_one_row() && project_weight(mu).unwrap()[0] == p)
                });
                let cq = classes.iter().position(|c| {
                    c.iter().any(|mu| mu.is_one_row() && project_weight(mu).unwrap()[0] == q)
                });
                assert_eq!(same_orbit, cp == cq, "weights {p},{q}");
            }
        }
    }

    #[test]
    fn predicted_homs_examples() {
        // Generic k: no predictions.
        assert!(predicted_homs(3, 2, &Specialization::generic(2)).unwrap().is_empty());
        // λ₂ = q²λ₁, n = 2: the reflection morphism Δ_{((2),)} → Δ_{((1),(1))}.
        let homs = predicted_homs(2, 2, &d2_critical()).unwrap();
        let mu = Multipartition::new(vec![vec![2], vec![]]);
        let nu = Multipartition::new(vec![vec![1], vec![1]]);
        assert!(homs.iter().any(|h| h.mu == mu && h.nu == nu), "{homs:?}");
        // d = 3, n = 3: 333 ∼ 321 gives a morphism into the weight-0 module.
        let homs = predicted_homs(3, 3, &d3_case()).unwrap();
        let mu = Multipartition::new(vec![vec![], vec![], vec![3]]);
        let nu = Multipartition::new(vec![vec![1], vec![1], vec![1]]);
        assert!(homs.iter().any(|h| h.mu == mu && h.nu == nu), "{homs:?}");
    }

    #[test]
    fn kappa_agrees_with_rewriting_engine() {
        // 𝐞_u·𝐞_v = κ_ν·𝐞_u in H(n,d) for nested block structures, checked
        // by the normal-form engine.
        use crate::hecke::{multiply, q_symmetrizer};
        use crate::ring::{RationalFn, SymbolicCtx};
        let d = 2;
        let ctx = SymbolicCtx { d };
        // (coarse blocks of u, refined blocks of v, ν as a one-row weight).
        let cases: Vec<(Vec<usize>, Vec<usize>, Multipartition)> = vec![
            (vec![2], vec![1, 1], Multipartition::new(vec![vec![1], vec![1]])),
            (vec![3], vec![1, 1, 1], Multipartition::new(vec![vec![1], vec![1], vec![1]])),
            (vec![4], vec![2, 2], Multipartition::new(vec![vec![2], vec![2]])),
            (vec![3, 1], vec![2, 1, 1], Multipartition::new(vec![vec![2], vec![1], vec![1]])),
        ];
        for (ub, vb, nu) in cases {
            let eu = q_symmetrizer(&ub, &ctx);
            let ev = q_symmetrizer(&vb, &ctx);
            // κ is a pure q-polynomial, so the λ-arity of the ring is just
            // the ambient d.
            let k = RationalFn::from_poly(kappa(&nu, d).unwrap());
            let lhs = multiply(&ctx, &eu, &ev);
            assert_eq!(lhs, eu.scale(&k), "κ mismatch for blocks {ub:?} ≥ {vb:?}");
        }
    }

    #[test]
    fn blob_blocks_refine_linkage() {
        // The blob decomposition oracle never places a composition factor
        // across linkage classes.
        use crate::blob::decomposition_oracle;
        use crate::walks::project_weight;
        let (l, m, n) = (3i64, 1i64, 4u64);
        let k = Specialization::new(l as u32, vec![(rat(1), 0), (rat(1), -2 * m)]).unwrap();
        let classes = linkage_classes(n, 2, &k);
        let class_of = |p: i64| {
            classes.iter().position(|c| {
                c.iter().any(|mu| mu.is_one_row() && project_weight(mu).unwrap()[0] == p)
            })
        };
        let dec = decomposition_oracle(n as usize, l, m).unwrap();
        for (i, &lam) in dec.weights.iter().enumerate() {
            for (j, &mu) in dec.weights.iter().enumerate() {
                if dec.entries[i][j] > 0 {
                    assert_eq!(class_of(lam), class_of(mu), "factor across classes: {lam} {mu}");
                }
            }
        }
    }
}
