//! The standard pseudo-Hermitian space `H_{p,q}`.
//!
//! The form is `f(u,v) = Σ η_j u^j conj(v^j)` with `η = diag(+1 ×p, −1 ×q)`,
//! linear in the first slot and conjugate-linear in the second. Everything
//! downstream inherits its signs from this convention.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::tol::{DEFAULT_TOL, TIE_TOL};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Signature `(p, q)` of the ambient form, with `p, q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSignature")]
pub struct Signature {
    p: usize,
    q: usize,
}

#[derive(Deserialize)]
struct RawSignature {
    p: usize,
    q: usize,
}

impl TryFrom<RawSignature> for Signature {
    type Error = Error;

    fn try_from(raw: RawSignature) -> Result<Self> {
        Signature::new(raw.p, raw.q)
    }
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidSignature { p, q });
        }
        Ok(Signature { p, q })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Diagonal entry `η_jj`.
    pub fn eta(&self, j: usize) -> f64 {
        if j < self.p {
            1.0
        } else {
            -1.0
        }
    }

    pub fn eta_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.n(), self.n(), |i, j| {
            if i == j {
                Complex64::new(self.eta(i), 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn trace_eta(&self) -> i64 {
        self.p as i64 - self.q as i64
    }

    /// The signatures exercised by the property suites.
    pub fn test_battery() -> Vec<Signature> {
        [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)]
            .into_iter()
            .map(|(p, q)| Signature { p, q })
            .collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Counts of positive and negative directions of a nondegenerate
/// Hermitian form on a subspace. Unlike [`Signature`], either count may be
/// zero (the complement `M_u` in signature `(1,q)` has no positive part).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
}

impl Inertia {
    pub fn new(positive: usize, negative: usize) -> Self {
        Inertia { positive, negative }
    }

    pub fn dim(&self) -> usize {
        self.positive + self.negative
    }
}

impl From<Signature> for Inertia {
    fn from(sig: Signature) -> Self {
        Inertia::new(sig.p, sig.q)
    }
}

/// A vector of `H_{p,q}` in standard coordinates.
///
/// Serializes as `{"signature": {"p": .., "q": ..}, "components": [[re, im], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVector")]
pub struct CVector {
    signature: Signature,
    components: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawVector {
    signature: Signature,
    components: Vec<Complex64>,
}

impl TryFrom<RawVector> for CVector {
    type Error = Error;

    fn try_from(raw: RawVector) -> Result<Self> {
        CVector::new(raw.signature, raw.components)
    }
}

impl CVector {
    pub fn new(signature: Signature, components: Vec<Complex64>) -> Result<Self> {
        if components.len() != signature.n() {
            return Err(Error::DimensionMismatch {
                expected: signature.n(),
                found: components.len(),
            });
        }
        Ok(CVector {
            signature,
            components,
        })
    }

    /// Build from real/imaginary pairs.
    pub fn from_pairs(signature: Signature, pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            signature,
            pairs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }

    /// Build from a flat `re, im, re, im, ...` slice.
    pub fn from_interleaved(signature: Signature, values: &[f64]) -> Result<Self> {
        if values.len() != 2 * signature.n() {
            return Err(Error::DimensionMismatch {
                expected: 2 * signature.n(),
                found: values.len(),
            });
        }
        Self::new(
            signature,
            values
                .chunks(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }

    pub fn zeros(signature: Signature) -> Self {
        CVector {
            signature,
            components: vec![ZERO; signature.n()],
        }
    }

    /// Standard basis vector `e_{j+1}` (zero-based index `j`).
    pub fn basis(signature: Signature, j: usize) -> Self {
        let mut v = Self::zeros(signature);
        v.components[j] = ONE;
        v
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[Complex64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Complex64> {
        self.components
    }

    pub fn scale(&self, c: Complex64) -> Self {
        CVector {
            signature: self.signature,
            components: self.components.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &CVector) -> Self {
        CVector {
            signature: self.signature,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    /// Squared Euclidean norm in standard coordinates.
    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Flat `re, im, ...` representation.
    pub fn to_interleaved(&self) -> Vec<f64> {
        self.components.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    /// Index of the coordinate of maximal modulus; ties within [`TIE_TOL`]
    /// (relative) resolve to the lowest index.
    pub fn pivot_index(&self) -> usize {
        pivot_index(&self.components)
    }

    pub(crate) fn from_raw(signature: Signature, components: Vec<Complex64>) -> Self {
        debug_assert_eq!(components.len(), signature.n());
        CVector {
            signature,
            components,
        }
    }
}

pub(crate) fn pivot_index(values: &[Complex64]) -> usize {
    let max = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    values
        .iter()
        .position(|z| z.norm() >= max * (1.0 - TIE_TOL))
        .unwrap_or(0)
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, j: usize) -> &Complex64 {
        &self.components[j]
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        self.axpy(ONE, rhs)
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        self.axpy(-ONE, rhs)
    }
}

impl Neg for &CVector {
    type Output = CVector;

    fn neg(self) -> CVector {
        self.scale(-ONE)
    }
}

impl Mul<&CVector> for Complex64 {
    type Output = CVector;

    fn mul(self, rhs: &CVector) -> CVector {
        rhs.scale(self)
    }
}

fn check_same(u: &CVector, v: &CVector) -> Result<()> {
    if u.signature != v.signature {
        return Err(Error::SignatureMismatch {
            expected: u.signature,
            found: v.signature,
        });
    }
    Ok(())
}

/// `f(u,v) = Σ η_j u^j conj(v^j)`.
pub fn form_eval(u: &CVector, v: &CVector) -> Result<Complex64> {
    check_same(u, v)?;
    Ok(form_unchecked(u, v))
}

pub(crate) fn form_unchecked(u: &CVector, v: &CVector) -> Complex64 {
    let sig = u.signature;
    u.components
        .iter()
        .zip(&v.components)
        .enumerate()
        .map(|(j, (a, b))| a * b.conj() * sig.eta(j))
        .sum()
}

/// `f(x,x)`, which is always real.
pub fn self_product(x: &CVector) -> f64 {
    let sig = x.signature;
    x.components
        .iter()
        .enumerate()
        .map(|(j, z)| sig.eta(j) * z.norm_sqr())
        .sum()
}

/// `|f(x,x)| / ‖x‖²`.
pub fn isotropy_residual(x: &CVector) -> Result<f64> {
    let n2 = x.norm_sqr();
    if n2 == 0.0 {
        return Err(Error::DegenerateInput("zero vector".into()));
    }
    Ok(self_product(x).abs() / n2)
}

/// True iff `|f(x,x)| ≤ tol·‖x‖²`.
pub fn is_isotropic(x: &CVector, tol: f64) -> Result<bool> {
    Ok(isotropy_residual(x)? <= tol)
}

/// A nonzero vector on the isotropic cone `Q`, certified at construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConePoint {
    vector: CVector,
    isotropy_residual: f64,
}

impl ConePoint {
    pub fn new(vector: CVector) -> Result<Self> {
        Self::with_tol(vector, DEFAULT_TOL)
    }

    pub fn with_tol(vector: CVector, tol: f64) -> Result<Self> {
        let residual = isotropy_residual(&vector)?;
        if !(residual <= tol) {
            return Err(Error::NotIsotropic { residual, tol });
        }
        Ok(ConePoint {
            vector,
            isotropy_residual: residual,
        })
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn into_vector(self) -> CVector {
        self.vector
    }

    pub fn signature(&self) -> Signature {
        self.vector.signature
    }

    pub fn isotropy_residual(&self) -> f64 {
        self.isotropy_residual
    }

    /// Multiply by a nonzero complex scalar; the cone is ℂ*-invariant.
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        if c == ZERO {
            return Err(Error::DegenerateInput("scaling by zero".into()));
        }
        Ok(ConePoint {
            vector: self.vector.scale(c),
            isotropy_residual: self.isotropy_residual,
        })
    }
}

impl<'de> Deserialize<'de> for ConePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vector: CVector,
        }
        let raw = Raw::deserialize(d)?;
        ConePoint::new(raw.vector).map_err(serde::de::Error::custom)
    }
}

/// Gram matrix `[f(v_i, v_j)]` of a family.
pub fn gram(vectors: &[CVector]) -> CMatrix {
    let k = vectors.len();
    CMatrix::from_fn(k, k, |i, j| form_unchecked(&vectors[i], &vectors[j]))
}

/// Pivoted Gram–Schmidt for the indefinite form.
///
/// At each step the remaining vector with the largest `|f(v,v)|` is
/// normalized (ties to the lowest index). When every remaining self-product
/// is negligible but the family still pairs nontrivially, the pair with the
/// largest `|f(v_i,v_j)|` is combined into a non-null vector first. The
/// output lists the positive vectors, then the negative ones, in the order
/// they were produced.
pub fn orthonormalize_indefinite(vectors: &[CVector], target: Inertia) -> Result<Vec<CVector>> {
    if target.dim() == 0 {
        return Ok(Vec::new());
    }
    let Some(first) = vectors.first() else {
        return Err(Error::DegenerateSubspace("empty input family".into()));
    };
    for v in vectors {
        check_same(first, v)?;
    }
    let scale = vectors.iter().map(CVector::norm_sqr).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::DegenerateSubspace("all input vectors vanish".into()));
    }
    let threshold = DEFAULT_TOL * scale;

    let mut remaining: Vec<CVector> = vectors.to_vec();
    let mut produced: Vec<(CVector, f64)> = Vec::with_capacity(target.dim());

    while produced.len() < target.dim() {
        let selfs: Vec<f64> = remaining.iter().map(self_product).collect();
        let (best, best_abs) = selfs
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bv), (i, s)| {
                if s.abs() > bv {
                    (i, s.abs())
                } else {
                    (bi, bv)
                }
            });

        let pivot = if best_abs > threshold {
            remaining.remove(best)
        } else {
            // All remaining vectors are null; look for a hyperbolic pair.
            let mut pair = None;
            let mut pair_abs = threshold;
            for i in 0..remaining.len() {
                for j in (i + 1)..remaining.len() {
                    let c = form_unchecked(&remaining[i], &remaining[j]);
                    if c.norm() > pair_abs {
                        pair_abs = c.norm();
                        pair = Some((i, j, c));
                    }
                }
            }
            let Some((i, j, c)) = pair else {
                return Err(Error::DegenerateSubspace(format!(
                    "form vanishes on the remaining span after {} of {} vectors",
                    produced.len(),
                    target.dim()
                )));
            };
            // f(v_i + t v_j, v_i + t v_j) ≈ 2|f(v_i, v_j)| for t = c/|c|.
            let t = c / c.norm();
            let combined = remaining[i].axpy(t, &remaining[j]);
            remaining[i] = combined;
            remaining.remove(i)
        };

        let s = self_product(&pivot);
        let sign = s.signum();
        let e = pivot.scale_real(1.0 / s.abs().sqrt());
        // Two projection passes keep the family orthogonal to working precision.
        for _ in 0..2 {
            for v in remaining.iter_mut() {
                let c = form_unchecked(v, &e) * sign;
                *v = v.axpy(-c, &e);
            }
        }
        produced.push((e, sign));
    }

    let positive: Vec<CVector> = produced
        .iter()
        .filter(|(_, s)| *s > 0.0)
        .map(|(v, _)| v.clone())
        .collect();
    let negative: Vec<CVector> = produced
        .iter()
        .filter(|(_, s)| *s < 0.0)
        .map(|(v, _)| v.clone())
        .collect();
    if positive.len() != target.positive || negative.len() != target.negative {
        return Err(Error::DegenerateSubspace(format!(
            "span has inertia ({}, {}), target is ({}, {})",
            positive.len(),
            negative.len(),
            target.positive,
            target.negative
        )));
    }
    Ok(positive.into_iter().chain(negative).collect())
}

/// Draw a random cone point: unit vectors on the spheres of `V₊` and `V₋`
/// (standard split), summed and multiplied by a random element of ℂ*.
pub fn sample_cone_point(sig: Signature, seed: u64) -> ConePoint {
    let mut rng = rng::stream(seed, 1);
    sample_cone_point_with(sig, &mut rng)
}

pub fn sample_cone_point_with<R: Rng + ?Sized>(sig: Signature, rng: &mut R) -> ConePoint {
    let plus = rng::unit_sphere(rng, sig.p);
    let minus = rng::unit_sphere(rng, sig.q);
    let c = rng::nonzero_scalar(rng);
    let components = plus.into_iter().chain(minus).map(|z| z * c).collect();
    ConePoint::new(CVector::from_raw(sig, components))
        .expect("sphere-product samples are isotropic to rounding")
}

/// An element of `U(p,q)`, i.e. a matrix with `U†ηU = η`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    signature: Signature,
    matrix: CMatrix,
}

impl GroupElement {
    /// Wrap a square matrix. Pseudo-unitarity is not checked here; use
    /// [`verify_isometry`].
    pub fn from_matrix(signature: Signature, matrix: CMatrix) -> Result<Self> {
        let n = signature.n();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(GroupElement { signature, matrix })
    }

    pub fn identity(signature: Signature) -> Self {
        GroupElement {
            signature,
            matrix: CMatrix::identity(signature.n(), signature.n()),
        }
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.signature != self.signature {
            return Err(Error::SignatureMismatch {
                expected: self.signature,
                found: v.signature,
            });
        }
        let n = self.signature.n();
        let components = (0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * v.components[j]).sum())
            .collect();
        Ok(CVector::from_raw(self.signature, components))
    }

    /// Image `U e_j` of the j-th standard basis vector.
    pub fn column(&self, j: usize) -> CVector {
        CVector::from_raw(
            self.signature,
            self.matrix.column(j).iter().copied().collect(),
        )
    }

    /// `max |U†ηU − η|`.
    pub fn isometry_residual(&self) -> f64 {
        let eta = self.signature.eta_matrix();
        let r = self.matrix.adjoint() * &eta * &self.matrix - eta;
        r.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn verify_isometry(u: &GroupElement, tol: f64) -> bool {
    u.isometry_residual() <= tol
}

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor series
/// truncated once terms drop below machine epsilon.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(squarings as i32), 0.0);

    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..64 {
        term = &term * &scaled * Complex64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if one_norm(&term) <= f64::EPSILON * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// True iff `A†η + ηA = 0` within `tol` (max entry).
pub fn is_eta_anti_hermitian(sig: Signature, a: &CMatrix, tol: f64) -> bool {
    let eta = sig.eta_matrix();
    let r = a.adjoint() * &eta + &eta * a;
    r.iter().all(|z| z.norm() <= tol)
}

/// `exp(A)` for an η-anti-Hermitian generator `A`.
pub fn pseudo_unitary_from_generator(sig: Signature, a: &CMatrix) -> Result<GroupElement> {
    let n = sig.n();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.nrows(),
        });
    }
    let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if !is_eta_anti_hermitian(sig, a, DEFAULT_TOL * scale) {
        return Err(Error::Domain("generator is not η-anti-Hermitian".into()));
    }
    GroupElement::from_matrix(sig, expm(a))
}

/// A random η-anti-Hermitian generator `A = ηB` with `B = (G − G†)/2`
/// anti-Hermitian and `G` complex Gaussian scaled by `1/√n`.
pub fn sample_generator<R: Rng + ?Sized>(sig: Signature, rng: &mut R) -> CMatrix {
    let n = sig.n();
    let s = 1.0 / (n as f64).sqrt();
    let g = CMatrix::from_fn(n, n, |_, _| rng::complex_normal(rng) * s);
    let b = (&g - g.adjoint()) * Complex64::new(0.5, 0.0);
    sig.eta_matrix() * b
}

/// A random element of `U(p,q)` as the exponential of a random generator.
pub fn sample_pseudo_unitary(sig: Signature, seed: u64) -> GroupElement {
    let mut rng = rng::stream(seed, 2);
    let a = sample_generator(sig, &mut rng);
    GroupElement {
        signature: sig,
        matrix: expm(&a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    #[test]
    fn signature_rejects_zero_parts() {
        assert!(matches!(
            Signature::new(0, 2),
            Err(Error::InvalidSignature { p: 0, q: 2 })
        ));
        assert!(Signature::new(2, 0).is_err());
        let s = sig(2, 3);
        assert_eq!(s.n(), 5);
        assert_eq!(s.trace_eta(), -1);
        let eta = s.eta_matrix();
        assert_eq!(&eta * &eta, CMatrix::identity(5, 5));
    }

    #[test]
    fn form_examples() {
        let s = sig(1, 1);
        let one = CVector::from_pairs(s, &[(1.0, 0.0), (1.0, 0.0)]).unwrap();
        assert_eq!(form_eval(&one, &one).unwrap(), c(0.0, 0.0));
        let e1 = CVector::basis(s, 0);
        let e2 = CVector::basis(s, 1);
        assert_eq!(form_eval(&e1, &e2).unwrap(), c(0.0, 0.0));
        let u = CVector::new(s, vec![c(2.0, 1.0), c(1.0, 0.0)]).unwrap();
        let v = CVector::new(s, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(form_eval(&u, &v).unwrap(), c(2.0, 2.0));
    }

    #[test]
    fn form_rejects_mixed_signatures() {
        let u = CVector::basis(sig(1, 1), 0);
        let v = CVector::basis(sig(2, 2), 0);
        assert!(matches!(
            form_eval(&u, &v),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn isotropy_examples() {
        let s = sig(1, 1);
        assert!(!is_isotropic(&CVector::basis(s, 0), DEFAULT_TOL).unwrap());
        let s22 = sig(2, 2);
        let x = &CVector::basis(s22, 0) + &CVector::basis(s22, 3);
        assert!(is_isotropic(&x, DEFAULT_TOL).unwrap());
        let near = CVector::from_pairs(s, &[(1.0, 0.0), (1.0 + 1e-12, 0.0)]).unwrap();
        assert!(is_isotropic(&near, 1e-9).unwrap());
        assert!(matches!(
            is_isotropic(&CVector::zeros(s), 1e-9),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn cone_point_rejects_non_isotropic() {
        assert!(matches!(
            ConePoint::new(CVector::basis(sig(1, 1), 0)),
            Err(Error::NotIsotropic { .. })
        ));
    }

    #[test]
    fn orthonormalize_keeps_orthonormal_input() {
        let s = sig(2, 2);
        let out = orthonormalize_indefinite(
            &[CVector::basis(s, 1), CVector::basis(s, 2)],
            Inertia::new(1, 1),
        )
        .unwrap();
        assert!(out[0].max_abs_diff(&CVector::basis(s, 1)) < 1e-15);
        assert!(out[1].max_abs_diff(&CVector::basis(s, 2)) < 1e-15);
    }

    #[test]
    fn orthonormalize_rescales() {
        let s = sig(2, 2);
        let out = orthonormalize_indefinite(
            &[CVector::basis(s, 1), CVector::basis(s, 2).scale_real(2.0)],
            Inertia::new(1, 1),
        )
        .unwrap();
        assert!(out[0].max_abs_diff(&CVector::basis(s, 1)) < 1e-15);
        assert!(out[1].max_abs_diff(&CVector::basis(s, 2)) < 1e-15);
    }

    #[test]
    fn orthonormalize_near_cone_pair() {
        let s = sig(1, 1);
        let a = CVector::from_pairs(s, &[(1.0, 0.0), (0.999, 0.0)]).unwrap();
        let out =
            orthonormalize_indefinite(&[a, CVector::basis(s, 1)], Inertia::new(1, 1)).unwrap();
        let g = gram(&out);
        assert!((g[(0, 0)] - c(1.0, 0.0)).norm() < 1e-9);
        assert!((g[(1, 1)] + c(1.0, 0.0)).norm() < 1e-9);
        assert!(g[(0, 1)].norm() < 1e-9);
    }

    #[test]
    fn orthonormalize_all_null_family() {
        let s = sig(1, 1);
        let a = CVector::from_pairs(s, &[(1.0, 0.0), (1.0, 0.0)]).unwrap();
        let b = CVector::from_pairs(s, &[(1.0, 0.0), (-1.0, 0.0)]).unwrap();
        let out = orthonormalize_indefinite(&[a, b], Inertia::new(1, 1)).unwrap();
        let g = gram(&out);
        assert!((g - sig(1, 1).eta_matrix())
            .iter()
            .all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn orthonormalize_reports_degeneracy() {
        let s = sig(1, 1);
        let a = CVector::from_pairs(s, &[(1.0, 0.0), (1.0, 0.0)]).unwrap();
        let err = orthonormalize_indefinite(&[a.clone(), a.scale_real(2.0)], Inertia::new(1, 1));
        assert!(matches!(err, Err(Error::DegenerateSubspace(_))));
        let err = orthonormalize_indefinite(&[CVector::basis(s, 0)], Inertia::new(0, 1));
        assert!(matches!(err, Err(Error::DegenerateSubspace(_))));
    }

    #[test]
    fn cone_sampler_is_deterministic_and_isotropic() {
        let s = sig(2, 3);
        let a = sample_cone_point(s, 42);
        let b = sample_cone_point(s, 42);
        assert_eq!(a, b);
        assert!(self_product(a.vector()).abs() <= 1e-12 * a.vector().norm_sqr());
        assert_ne!(a, sample_cone_point(s, 43));
    }

    #[test]
    fn zero_generator_gives_identity() {
        let s = sig(2, 1);
        let u = pseudo_unitary_from_generator(s, &CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(u.matrix(), &CMatrix::identity(3, 3));
    }

    #[test]
    fn generator_must_be_eta_anti_hermitian() {
        let s = sig(1, 1);
        let a = CMatrix::identity(2, 2);
        assert!(matches!(
            pseudo_unitary_from_generator(s, &a),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn expm_matches_scalar_exponential() {
        let a = CMatrix::from_fn(1, 1, |_, _| c(0.3, 2.0));
        let e = expm(&a);
        assert!((e[(0, 0)] - c(0.3, 2.0).exp()).norm() < 1e-14);
        // nilpotent: exp([[0,t],[0,0]]) = [[1,t],[0,1]]
        let mut n = CMatrix::zeros(2, 2);
        n[(0, 1)] = c(7.0, -1.0);
        let e = expm(&n);
        assert!((e[(0, 1)] - c(7.0, -1.0)).norm() < 1e-13);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn isometry_checks() {
        let s = sig(1, 1);
        assert!(verify_isometry(&GroupElement::identity(s), 0.0));
        let mut d = CMatrix::identity(2, 2);
        d[(0, 0)] = c(2.0, 0.0);
        assert!(!verify_isometry(
            &GroupElement::from_matrix(s, d).unwrap(),
            1e-9
        ));
        for seed in 0..20 {
            let u = sample_pseudo_unitary(sig(2, 3), seed);
            assert!(
                verify_isometry(&u, 1e-9),
                "seed {seed}: {}",
                u.isometry_residual()
            );
        }
    }

    #[test]
    fn pivot_ties_go_to_lowest_index() {
        assert_eq!(pivot_index(&[c(0.0, 1.0), c(1.0, 0.0)]), 0);
        assert_eq!(pivot_index(&[c(0.5, 0.0), c(-2.0, 0.0), c(0.0, 2.0)]), 1);
    }
}
