//! The quotients `Q′ = Q/ℝ⁺` and `Q̃ = Q′/U(1)`.
//!
//! A split `V = V₊ ⊕ V₋` picks the cross-section `Q_s` of unit positive and
//! negative parts, which realizes `Q′` as `S^{2p−1} × S^{2q−1}`. Points of
//! `Q̃` are represented by elements of `Q_s` whose largest coordinate has
//! been rotated onto the positive real axis.
//!
//! The pivot-phase gauge is discontinuous where two coordinates tie in
//! modulus; no continuous global gauge exists since the circle bundle
//! `Q′ → Q̃` is nontrivial.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pseudoherm::{form_unchecked, gram, CVector, ConePoint, GroupElement, Signature};
use crate::tol::{DEFAULT_TOL, SECTION_SNAP};

/// An orthogonal decomposition `V = V₊ ⊕ V₋` given by an η-orthonormal
/// basis: the first `p` vectors span `V₊`, the last `q` span `V₋`.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    id: String,
    signature: Signature,
    basis: Vec<CVector>,
}

impl Split {
    pub fn standard(signature: Signature) -> Self {
        Split {
            id: "standard".into(),
            signature,
            basis: (0..signature.n())
                .map(|j| CVector::basis(signature, j))
                .collect(),
        }
    }

    /// Validates that the Gram matrix of `basis` is η within `1e-9`.
    pub fn new(id: impl Into<String>, basis: Vec<CVector>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(Error::DegenerateInput("empty split basis".into()));
        };
        let signature = first.signature();
        if basis.len() != signature.n() {
            return Err(Error::DimensionMismatch {
                expected: signature.n(),
                found: basis.len(),
            });
        }
        if let Some(v) = basis.iter().find(|v| v.signature() != signature) {
            return Err(Error::SignatureMismatch {
                expected: signature,
                found: v.signature(),
            });
        }
        let residual = (gram(&basis) - signature.eta_matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if residual > DEFAULT_TOL {
            return Err(Error::Domain(format!(
                "split basis is not η-orthonormal (residual {residual:e})"
            )));
        }
        Ok(Split {
            id: id.into(),
            signature,
            basis,
        })
    }

    /// The image of the standard split under a pseudo-unitary map.
    pub fn transported(g: &GroupElement, id: impl Into<String>) -> Result<Self> {
        let basis = (0..g.signature().n()).map(|j| g.column(j)).collect();
        Split::new(id, basis)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn basis(&self) -> &[CVector] {
        &self.basis
    }

    /// Coefficients `c_j` with `x = Σ c_j e_j`, i.e. `c_j = η_j f(x, e_j)`.
    pub fn coefficients(&self, x: &CVector) -> Vec<Complex64> {
        self.basis
            .iter()
            .enumerate()
            .map(|(j, e)| form_unchecked(x, e) * self.signature.eta(j))
            .collect()
    }

    /// `Σ c_j e_j` over the given coefficient range.
    fn combine(&self, coeffs: &[Complex64], offset: usize) -> CVector {
        coeffs
            .iter()
            .enumerate()
            .fold(CVector::zeros(self.signature), |acc, (k, c)| {
                acc.axpy(*c, &self.basis[offset + k])
            })
    }

    fn check(&self, x: &CVector) -> Result<()> {
        if x.signature() != self.signature {
            return Err(Error::SignatureMismatch {
                expected: self.signature,
                found: x.signature(),
            });
        }
        Ok(())
    }
}

/// `x = x₊ + x₋` with `f(x₊,x₊) = −f(x₋,x₋) = R²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub plus: CVector,
    pub minus: CVector,
    /// The common split norm `R = √f(x₊,x₊) = √(−f(x₋,x₋))`.
    pub radius: f64,
}

struct SplitNorms {
    plus_sq: f64,
    minus_sq: f64,
}

fn split_norms(coeffs: &[Complex64], p: usize) -> SplitNorms {
    SplitNorms {
        plus_sq: coeffs[..p].iter().map(|c| c.norm_sqr()).sum(),
        minus_sq: coeffs[p..].iter().map(|c| c.norm_sqr()).sum(),
    }
}

fn radius_of(x: &ConePoint, norms: &SplitNorms) -> Result<f64> {
    let total = norms.plus_sq + norms.minus_sq;
    if !(total > DEFAULT_TOL * x.vector().norm_sqr()) {
        return Err(Error::DegenerateInput(
            "split norm vanishes on a nonzero cone point".into(),
        ));
    }
    Ok((0.5 * total).sqrt())
}

pub fn split_decompose(x: &ConePoint, s: &Split) -> Result<Decomposition> {
    s.check(x.vector())?;
    let p = s.signature.p();
    let coeffs = s.coefficients(x.vector());
    let radius = radius_of(x, &split_norms(&coeffs, p))?;
    Ok(Decomposition {
        plus: s.combine(&coeffs[..p], 0),
        minus: s.combine(&coeffs[p..], p),
        radius,
    })
}

/// The representative of the ray `ℝ⁺x` on the cross-section `Q_s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayRep {
    vector: ConePoint,
    split_id: String,
    plus_norm: f64,
    minus_norm: f64,
    #[serde(skip)]
    split: Split,
}

impl RayRep {
    pub fn vector(&self) -> &ConePoint {
        &self.vector
    }

    pub fn split(&self) -> &Split {
        &self.split
    }

    /// `f(x₊,x₊)`.
    pub fn plus_norm(&self) -> f64 {
        self.plus_norm
    }

    /// `−f(x₋,x₋)`.
    pub fn minus_norm(&self) -> f64 {
        self.minus_norm
    }

    /// Coordinates of `(x₊, x₋)` in the split basis: a point of
    /// `S^{2p−1} × S^{2q−1}`.
    pub fn sphere_coords(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut c = self.split.coefficients(self.vector.vector());
        let minus = c.split_off(self.split.signature.p());
        (c, minus)
    }

    /// Inverse of [`RayRep::sphere_coords`].
    pub fn from_sphere_coords(
        split: &Split,
        plus: &[Complex64],
        minus: &[Complex64],
    ) -> Result<Self> {
        let sig = split.signature;
        if plus.len() != sig.p() || minus.len() != sig.q() {
            return Err(Error::DimensionMismatch {
                expected: sig.n(),
                found: plus.len() + minus.len(),
            });
        }
        let plus_norm: f64 = plus.iter().map(|c| c.norm_sqr()).sum();
        let minus_norm: f64 = minus.iter().map(|c| c.norm_sqr()).sum();
        if (plus_norm - 1.0).abs() > DEFAULT_TOL || (minus_norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Domain(
                "sphere coordinates are not unit vectors".into(),
            ));
        }
        let v = &split.combine(plus, 0) + &split.combine(minus, sig.p());
        Ok(RayRep {
            vector: ConePoint::new(v)?,
            split_id: split.id.clone(),
            plus_norm,
            minus_norm,
            split: split.clone(),
        })
    }
}

pub fn canonicalize_ray(x: &ConePoint, s: &Split) -> Result<RayRep> {
    s.check(x.vector())?;
    let p = s.signature.p();
    let coeffs = s.coefficients(x.vector());
    let norms = split_norms(&coeffs, p);
    let radius = radius_of(x, &norms)?;
    let (vector, plus_norm, minus_norm) = if (radius - 1.0).abs() <= SECTION_SNAP {
        (x.clone(), norms.plus_sq, norms.minus_sq)
    } else {
        let inv = 1.0 / radius;
        let v = ConePoint::new(x.vector().scale_real(inv))?;
        (v, norms.plus_sq * inv * inv, norms.minus_sq * inv * inv)
    };
    Ok(RayRep {
        vector,
        split_id: s.id.clone(),
        plus_norm,
        minus_norm,
        split: s.clone(),
    })
}

/// Representative of the class `ℂ*x ∈ Q̃`: the `Q_s` representative with the
/// largest coordinate (lowest index among ties) made real positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjRep {
    vector: ConePoint,
    pivot_index: usize,
    split_id: String,
}

impl ProjRep {
    pub fn vector(&self) -> &ConePoint {
        &self.vector
    }

    pub fn pivot_index(&self) -> usize {
        self.pivot_index
    }

    pub fn split_id(&self) -> &str {
        &self.split_id
    }
}

pub fn canonicalize_phase(x: &ConePoint, s: &Split) -> Result<ProjRep> {
    let ray = canonicalize_ray(x, s)?;
    let pivot_index = ray.vector.vector().pivot_index();
    let z = ray.vector.vector()[pivot_index];
    let vector = if z.im == 0.0 && z.re > 0.0 {
        ray.vector
    } else {
        let phase = z.conj() / z.norm();
        let mut comps = ray.vector.vector().scale(phase).into_components();
        comps[pivot_index] = Complex64::new(z.norm(), 0.0);
        ConePoint::new(CVector::new(s.signature, comps)?)?
    };
    Ok(ProjRep {
        vector,
        pivot_index,
        split_id: ray.split_id,
    })
}

/// Whether `x` and `y` define the same point of `Q̃`, judged on their
/// phase-gauged representatives for the standard split.
pub fn proj_equivalent(x: &ConePoint, y: &ConePoint, tol: f64) -> bool {
    if x.signature() != y.signature() {
        return false;
    }
    let s = Split::standard(x.signature());
    match (canonicalize_phase(x, &s), canonicalize_phase(y, &s)) {
        (Ok(a), Ok(b)) => a.vector.vector().max_abs_diff(b.vector.vector()) <= tol,
        _ => false,
    }
}

fn angle(z: Complex64) -> f64 {
    let a = z.arg().rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Angles `(φ₁, φ₂) ∈ [0,2π)²` of the torus `Q′ ≅ S¹ × S¹` in signature (1,1).
pub fn torus_coords(x: &ConePoint) -> Result<(f64, f64)> {
    let sig = x.signature();
    if sig.p() != 1 || sig.q() != 1 {
        return Err(Error::UnsupportedSignature(sig));
    }
    let ray = canonicalize_ray(x, &Split::standard(sig))?;
    let v = ray.vector.vector();
    Ok((angle(v[0]), angle(v[1])))
}

/// Difference of two angles reduced to `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > std::f64::consts::PI {
        d - TAU
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;
    use crate::pseudoherm::{sample_cone_point, sample_pseudo_unitary};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cone(p: usize, q: usize, pairs: &[(f64, f64)]) -> ConePoint {
        ConePoint::new(CVector::from_pairs(Signature::new(p, q).unwrap(), pairs).unwrap()).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let x = cone(1, 1, &[(2.0, 0.0), (2.0, 0.0)]);
        let s = Split::standard(x.signature());
        let d = split_decompose(&x, &s).unwrap();
        assert_eq!(d.plus.components(), &[c(2.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(d.minus.components(), &[c(0.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(d.radius, 2.0);

        let x = cone(2, 2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let d = split_decompose(&x, &Split::standard(x.signature())).unwrap();
        assert_eq!(d.plus, CVector::basis(x.signature(), 0));
        assert_eq!(d.minus, CVector::basis(x.signature(), 3));
        assert_eq!(d.radius, 1.0);
    }

    #[test]
    fn decompose_with_transported_split() {
        let sig = Signature::new(2, 3).unwrap();
        for seed in 0..50 {
            let x = sample_cone_point(sig, seed);
            let s = Split::transported(&sample_pseudo_unitary(sig, seed + 1000), "t").unwrap();
            let d = split_decompose(&x, &s).unwrap();
            let np = form_unchecked(&d.plus, &d.plus).re;
            let nm = -form_unchecked(&d.minus, &d.minus).re;
            assert!((np - nm).abs() <= 1e-9 * np, "seed {seed}");
            assert!(
                (&d.plus + &d.minus).max_abs_diff(x.vector()) <= 1e-12 * x.vector().norm() * 10.0
            );
        }
    }

    #[test]
    fn split_rejects_bad_basis() {
        let sig = Signature::new(1, 1).unwrap();
        let basis = vec![CVector::basis(sig, 0), CVector::basis(sig, 0)];
        assert!(matches!(Split::new("bad", basis), Err(Error::Domain(_))));
    }

    #[test]
    fn ray_examples() {
        let x = cone(1, 1, &[(2.0, 0.0), (2.0, 0.0)]);
        let s = Split::standard(x.signature());
        let r = canonicalize_ray(&x, &s).unwrap();
        assert_eq!(
            r.vector().vector().components(),
            &[c(1.0, 0.0), c(1.0, 0.0)]
        );

        let x = cone(1, 1, &[(3.0, 0.0), (0.0, 3.0)]);
        let r = canonicalize_ray(&x, &s).unwrap();
        assert!(
            r.vector().vector().max_abs_diff(
                &CVector::from_pairs(x.signature(), &[(1.0, 0.0), (0.0, 1.0)]).unwrap()
            ) < 1e-15
        );
        assert_eq!(r.plus_norm(), 1.0);
        assert_eq!(r.minus_norm(), 1.0);
    }

    #[test]
    fn ray_is_idempotent_exactly() {
        let sig = Signature::new(3, 2).unwrap();
        let s = Split::transported(&sample_pseudo_unitary(sig, 5), "t").unwrap();
        for seed in 0..200 {
            let x = sample_cone_point(sig, seed);
            let once = canonicalize_ray(&x, &s).unwrap();
            let twice = canonicalize_ray(once.vector(), &s).unwrap();
            assert_eq!(once.vector(), twice.vector());
        }
    }

    #[test]
    fn sphere_coords_round_trip() {
        let sig = Signature::new(2, 2).unwrap();
        let s = Split::transported(&sample_pseudo_unitary(sig, 9), "t").unwrap();
        let x = sample_cone_point(sig, 3);
        let r = canonicalize_ray(&x, &s).unwrap();
        let (plus, minus) = r.sphere_coords();
        let back = RayRep::from_sphere_coords(&s, &plus, &minus).unwrap();
        assert!(back.vector().vector().max_abs_diff(r.vector().vector()) < 1e-13);
        assert!(RayRep::from_sphere_coords(&s, &[c(2.0, 0.0), c(0.0, 0.0)], &minus).is_err());
    }

    #[test]
    fn phase_examples() {
        let s = Split::standard(Signature::new(1, 1).unwrap());
        let x = cone(1, 1, &[(0.0, 1.0), (0.0, 1.0)]);
        let r = canonicalize_phase(&x, &s).unwrap();
        assert!(
            r.vector()
                .vector()
                .max_abs_diff(&cone(1, 1, &[(1.0, 0.0), (1.0, 0.0)]).into_vector())
                < 1e-15
        );

        let x = cone(1, 1, &[(1.0, 0.0), (0.0, 1.0)]);
        let r = canonicalize_phase(&x, &s).unwrap();
        assert_eq!(r.pivot_index(), 0);
        assert_eq!(r.vector(), &x);
    }

    #[test]
    fn phase_is_a_retraction() {
        let sig = Signature::new(2, 3).unwrap();
        let s = Split::standard(sig);
        for seed in 0..200 {
            let x = sample_cone_point(sig, seed);
            let a = canonicalize_phase(&x, &s).unwrap();
            let b = canonicalize_phase(a.vector(), &s).unwrap();
            assert_eq!(a, b);
            let cx = x.scaled(c(-0.7, 1.9)).unwrap();
            let d = canonicalize_phase(&cx, &s).unwrap();
            assert!(a.vector().vector().max_abs_diff(d.vector().vector()) < 1e-9);
        }
    }

    #[test]
    fn equivalence_examples() {
        let sig = Signature::new(2, 2).unwrap();
        let x = sample_cone_point(sig, 1);
        assert!(proj_equivalent(&x, &x.scaled(c(2.0, 2.0)).unwrap(), 1e-9));
        let a = cone(2, 2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let b = cone(2, 2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
        assert!(!proj_equivalent(&a, &b, 1e-9));
    }

    #[test]
    fn torus_examples() {
        let (a, b) = torus_coords(&cone(1, 1, &[(1.0, 0.0), (1.0, 0.0)])).unwrap();
        assert_eq!((a, b), (0.0, 0.0));
        let (a, b) = torus_coords(&cone(1, 1, &[(0.0, 1.0), (-1.0, 0.0)])).unwrap();
        assert!((a - FRAC_PI_2).abs() < 1e-15 && (b - PI).abs() < 1e-15);
        let x = sample_cone_point(Signature::new(2, 1).unwrap(), 0);
        assert!(matches!(
            torus_coords(&x),
            Err(Error::UnsupportedSignature(_))
        ));
    }

    #[test]
    fn torus_shift_under_u1() {
        let sig = Signature::new(1, 1).unwrap();
        for seed in 0..100 {
            let x = sample_cone_point(sig, seed);
            let phi = 0.37 * seed as f64;
            let (a0, b0) = torus_coords(&x).unwrap();
            let (a1, b1) =
                torus_coords(&x.scaled(Complex64::from_polar(1.0, phi)).unwrap()).unwrap();
            assert!(angle_diff(a1 - a0, phi).abs() < 1e-9);
            assert!(angle_diff(b1 - b0, phi).abs() < 1e-9);
        }
    }
}
