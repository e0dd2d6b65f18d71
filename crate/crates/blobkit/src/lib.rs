//! Exact computational algebra toolkit for cyclotomic Hecke algebra
//! quotients, the blob algebra, and affine alcove combinatorics.
//!
//! The crate is organized bottom-up:
//!
//! * [`ring`] — exact arithmetic in `ℤ[q, q⁻¹, λ₁, …, λ_d]`, its fraction
//!   field, and cyclotomic specializations.
//! * [`linalg`] — dense exact linear algebra generic over any [`ring::Scalar`].
//! * [`walks`] — walk combinatorics on multipartition lattices and the
//!   eigenvalue sequences `λ^w`.
//! * [`alcove`] — rank-1 and rank-2 alcove geometry with the formal
//!   Kazhdan–Lusztig-style wall-crossing recursion.
//! * [`linkage`] — linkage classes and hom-space predictions driven by walk
//!   orbits under specialization.
//! * [`hecke`] — the Ariki–Koike normal-form rewriting engine, explicit
//!   idempotents, ideal membership, and center checks.
//! * [`blob`] — the blob diagram algebra, standard-module Gram matrices, and
//!   the rank-based decomposition oracle.
//! * [`tensor`] — tensor-space and braid-group representations with exact
//!   symbolic, cyclotomic, and floating-point backends.

pub mod ring;
pub mod linalg;
pub mod walks;
pub mod alcove;
pub mod linkage;
pub mod hecke;
pub mod blob;
pub mod tensor;
