//! Witt bases, the compactification chart `κ`, and the boundary set `a⊥`.
//!
//! For a cone point `x` a hyperbolic partner `u` (isotropic, `f(u,x) = 1`)
//! splits `V = span{x,u} ⊕ M_u`, where `M_u = {x,u}^⊥` has inertia
//! `(p−1, q−1)`. The chart
//!
//! ```text
//! κ₀(r, y) = y + u + (−½ f(y,y) + r i) x
//! ```
//!
//! lands on the cone with `f(x, κ₀) = 1`, and `κ = P ∘ κ₀` identifies
//! `ℝ × M_u` with `Q̃ \ a⊥`, `a = P(x)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudoherm::{
    form_unchecked, gram, orthonormalize_indefinite, pivot_index, self_product, CVector, ConePoint,
    Inertia, Signature,
};
use crate::quotients::{canonicalize_phase, ProjRep, Split};
use crate::rng;
use crate::tol::{DEFAULT_TOL, FD_RANK_TOL, FD_STEP};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const HALF: Complex64 = Complex64::new(0.5, 0.0);

fn check_sig(expected: Signature, v: &CVector) -> Result<()> {
    if v.signature() != expected {
        return Err(Error::SignatureMismatch {
            expected,
            found: v.signature(),
        });
    }
    Ok(())
}

/// An isotropic `u` with `f(u,x) = 1`.
///
/// With a hint `v` (required: `f(v,x) ≠ 0`) the partner is
/// `u = v′ − ½ f(v′,v′) x` where `v′ = v / f(v,x)`. Without a hint `v` is the
/// standard basis vector maximizing `|f(e_j,x)|`.
pub fn hyperbolic_partner(x: &ConePoint, hint: Option<&CVector>) -> Result<CVector> {
    let xv = x.vector();
    let v = match hint {
        Some(v) => {
            check_sig(x.signature(), v)?;
            v.clone()
        }
        None => CVector::basis(x.signature(), pivot_index(xv.components())),
    };
    let pairing = form_unchecked(&v, xv);
    if !(pairing.norm() > DEFAULT_TOL * v.norm() * xv.norm()) {
        return Err(match hint {
            Some(_) => Error::Domain("hint is orthogonal to x".into()),
            None => Error::InternalContract("no standard basis vector pairs with x".into()),
        });
    }
    let v1 = v.scale(ONE / pairing);
    let s = self_product(&v1);
    Ok(v1.axpy(Complex64::new(-0.5 * s, 0.0), xv))
}

/// `v − f(v,e₁)e₁ + f(v,eₙ)eₙ`: projection onto `span{e₁, eₙ}^⊥ = M_u`.
fn project_off_hyperbolic(v: &CVector, e1: &CVector, en: &CVector) -> CVector {
    let a = form_unchecked(v, e1);
    let b = form_unchecked(v, en);
    v.axpy(-a, e1).axpy(b, en)
}

struct WittData {
    u: CVector,
    e1: CVector,
    en: CVector,
    middle: Vec<CVector>,
}

fn witt_data(x: &ConePoint, hint: Option<&CVector>) -> Result<WittData> {
    let sig = x.signature();
    let xv = x.vector();
    let u = hyperbolic_partner(x, hint)?;
    let e1 = xv.scale(HALF).axpy(ONE, &u);
    let en = xv - &e1;
    let inertia = Inertia::new(sig.p() - 1, sig.q() - 1);
    let middle = if inertia.dim() == 0 {
        Vec::new()
    } else {
        let candidates: Vec<CVector> = (0..sig.n())
            .map(|j| project_off_hyperbolic(&CVector::basis(sig, j), &e1, &en))
            .collect();
        let mut middle = orthonormalize_indefinite(&candidates, inertia)?;
        // One more pass against e₁, eₙ to remove drift from the orthonormalization.
        for m in middle.iter_mut() {
            *m = project_off_hyperbolic(m, &e1, &en);
        }
        middle
    };
    Ok(WittData { u, e1, en, middle })
}

/// An η-orthonormal basis `e` with `x = e₁ + eₙ`: `e₁ = x/2 + u`,
/// `eₙ = x − e₁`, and the middle vectors an orthonormalized basis of `M_u`
/// (positive ones first).
pub fn extend_to_witt_basis(x: &ConePoint) -> Result<Vec<CVector>> {
    let w = witt_data(x, None)?;
    let mut basis = Vec::with_capacity(x.signature().n());
    basis.push(w.e1);
    basis.extend(w.middle);
    basis.push(w.en);
    Ok(basis)
}

/// A chart centred at `a = P(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChart")]
pub struct ChartFrame {
    x: ConePoint,
    u: CVector,
    mu_basis: Vec<CVector>,
}

#[derive(Deserialize)]
struct RawChart {
    x: ConePoint,
    u: CVector,
    mu_basis: Vec<CVector>,
}

impl TryFrom<RawChart> for ChartFrame {
    type Error = Error;

    fn try_from(raw: RawChart) -> Result<Self> {
        ChartFrame::new(raw.x, raw.u, raw.mu_basis)
    }
}

impl ChartFrame {
    /// Assemble and certify a chart: `u` isotropic with `f(u,x) = 1`, and
    /// `mu_basis` orthonormal of inertia `(p−1, q−1)` and orthogonal to `x`, `u`.
    pub fn new(x: ConePoint, u: CVector, mu_basis: Vec<CVector>) -> Result<Self> {
        let sig = x.signature();
        check_sig(sig, &u)?;
        for m in &mu_basis {
            check_sig(sig, m)?;
        }
        if mu_basis.len() != sig.n() - 2 {
            return Err(Error::DimensionMismatch {
                expected: sig.n() - 2,
                found: mu_basis.len(),
            });
        }
        let chart = ChartFrame { x, u, mu_basis };
        let residual = chart.residual();
        if !(residual <= DEFAULT_TOL) {
            return Err(Error::Domain(format!(
                "chart frame invariants fail (residual {residual:e})"
            )));
        }
        Ok(chart)
    }

    pub fn x(&self) -> &ConePoint {
        &self.x
    }

    pub fn u(&self) -> &CVector {
        &self.u
    }

    pub fn mu_basis(&self) -> &[CVector] {
        &self.mu_basis
    }

    pub fn signature(&self) -> Signature {
        self.x.signature()
    }

    pub fn mu_inertia(&self) -> Inertia {
        let sig = self.signature();
        Inertia::new(sig.p() - 1, sig.q() - 1)
    }

    /// `η` restricted to `M_u` in its basis: `+1` for the first `p−1`.
    pub fn mu_eta(&self, k: usize) -> f64 {
        if k < self.mu_inertia().positive {
            1.0
        } else {
            -1.0
        }
    }

    /// The Witt basis `(e₁, mu_basis…, eₙ)` with `e₁ + eₙ = x`.
    pub fn witt_basis(&self) -> Vec<CVector> {
        let xv = self.x.vector();
        let e1 = xv.scale(HALF).axpy(ONE, &self.u);
        let en = xv - &e1;
        let mut basis = vec![e1];
        basis.extend(self.mu_basis.iter().cloned());
        basis.push(en);
        basis
    }

    /// Largest violation of the frame invariants.
    pub fn residual(&self) -> f64 {
        let xv = self.x.vector();
        let un = self.u.norm();
        let mut worst = self_product(&self.u).abs() / (un * un);
        worst = worst.max((form_unchecked(&self.u, xv) - ONE).norm());
        let g = gram(&self.mu_basis);
        for i in 0..self.mu_basis.len() {
            for j in 0..self.mu_basis.len() {
                let target = if i == j { self.mu_eta(i) } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).norm());
            }
            let m = &self.mu_basis[i];
            worst = worst.max(form_unchecked(m, xv).norm() / xv.norm());
            worst = worst.max(form_unchecked(m, &self.u).norm() / un);
        }
        worst
    }

    /// `y = Σ y_k m_k`.
    pub fn embed(&self, y_coords: &[Complex64]) -> Result<CVector> {
        if y_coords.len() != self.mu_basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mu_basis.len(),
                found: y_coords.len(),
            });
        }
        Ok(y_coords
            .iter()
            .zip(&self.mu_basis)
            .fold(CVector::zeros(self.signature()), |acc, (c, m)| {
                acc.axpy(*c, m)
            }))
    }

    /// Coordinates `η_k f(v, m_k)` of the `M_u` component of `v`.
    pub fn mu_coords(&self, v: &CVector) -> Vec<Complex64> {
        self.mu_basis
            .iter()
            .enumerate()
            .map(|(k, m)| form_unchecked(v, m) * self.mu_eta(k))
            .collect()
    }
}

pub fn make_chart(x: &ConePoint) -> Result<ChartFrame> {
    let w = witt_data(x, None)?;
    ChartFrame::new(x.clone(), w.u, w.middle)
}

/// Chart with the partner built from an explicit hint vector.
pub fn make_chart_with_hint(x: &ConePoint, hint: &CVector) -> Result<ChartFrame> {
    let w = witt_data(x, Some(hint))?;
    ChartFrame::new(x.clone(), w.u, w.middle)
}

/// `κ₀(r, y) = y + u + (−½ f(y,y) + r i) x`.
pub fn kappa0(chart: &ChartFrame, r: f64, y_coords: &[Complex64]) -> Result<ConePoint> {
    let y = chart.embed(y_coords)?;
    let beta = Complex64::new(-0.5 * self_product(&y), r);
    let v = y.axpy(ONE, &chart.u).axpy(beta, chart.x.vector());
    ConePoint::new(v)
}

/// `κ = P ∘ κ₀`, represented in the phase gauge of the standard split.
pub fn kappa(chart: &ChartFrame, r: f64, y_coords: &[Complex64]) -> Result<ProjRep> {
    let k = kappa0(chart, r, y_coords)?;
    canonicalize_phase(&k, &Split::standard(chart.signature()))
}

/// Chart coordinates `(r, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub r: f64,
    pub y: Vec<Complex64>,
}

/// Result of inverting `κ`: either coordinates or the statement that the
/// class lies on the boundary `a⊥`, outside the chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum ChartInverse {
    Point(ChartPoint),
    InAperp,
}

impl ChartInverse {
    pub fn point(&self) -> Option<&ChartPoint> {
        match self {
            ChartInverse::Point(p) => Some(p),
            ChartInverse::InAperp => None,
        }
    }
}

/// Invert `κ`: rescale `b` to `z` with `f(z,x) = 1`, write
/// `z = y + u + βx`, return `(Im β, y)`.
pub fn chart_inverse(chart: &ChartFrame, b: &ConePoint) -> Result<ChartInverse> {
    check_sig(chart.signature(), b.vector())?;
    let xv = chart.x.vector();
    let pairing = form_unchecked(b.vector(), xv);
    if pairing.norm() <= DEFAULT_TOL * b.vector().norm() * xv.norm() {
        return Ok(ChartInverse::InAperp);
    }
    let z = b.vector().scale(ONE / pairing);
    let beta = form_unchecked(&z, &chart.u);
    Ok(ChartInverse::Point(ChartPoint {
        r: beta.im,
        y: chart.mu_coords(&z),
    }))
}

/// `a ⊥ b`: `|f(b,a)| ≤ tol·‖a‖‖b‖`. Independent of the representatives.
pub fn is_perp(a: &ConePoint, b: &ConePoint, tol: f64) -> bool {
    if a.signature() != b.signature() {
        return false;
    }
    form_unchecked(b.vector(), a.vector()).norm() <= tol * a.vector().norm() * b.vector().norm()
}

/// Stratum of a point of `a⊥` relative to the chart centre `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AperpClass {
    /// The class of `x` itself.
    Apex,
    /// `b = αx + Σ α^j m_j` with the positive and negative middle blocks
    /// normalized to unit length and the joint phase fixed by the pivot gauge.
    Generic {
        alpha: Complex64,
        plus_coords: Vec<Complex64>,
        minus_coords: Vec<Complex64>,
    },
}

pub fn aperp_classify(chart: &ChartFrame, b: &ConePoint) -> Result<AperpClass> {
    check_sig(chart.signature(), b.vector())?;
    if !is_perp(&chart.x, b, DEFAULT_TOL) {
        return Err(Error::Domain("point is not in a⊥".into()));
    }
    let bv = b.vector();
    let middle = chart.mu_coords(bv);
    let alpha = form_unchecked(bv, &chart.u);
    let split = chart.mu_inertia().positive;
    let plus_sq: f64 = middle[..split].iter().map(|c| c.norm_sqr()).sum();
    let minus_sq: f64 = middle[split..].iter().map(|c| c.norm_sqr()).sum();
    if (plus_sq + minus_sq).sqrt() <= DEFAULT_TOL * bv.norm() {
        return Ok(AperpClass::Apex);
    }
    let scale = 1.0 / (0.5 * (plus_sq + minus_sq)).sqrt();
    let pivot = pivot_index(&middle);
    let z = middle[pivot];
    let phase = z.conj() / z.norm() * scale;
    let mut coords: Vec<Complex64> = middle.iter().map(|c| c * phase).collect();
    coords[pivot] = Complex64::new(z.norm() * scale, 0.0);
    let minus_coords = coords.split_off(split);
    Ok(AperpClass::Generic {
        alpha: alpha * phase,
        plus_coords: coords,
        minus_coords,
    })
}

/// Local dimension of the generic stratum of `a⊥` in `Q̃`, estimated as the
/// numerical rank of a finite-difference Jacobian.
pub fn aperp_dimension_estimate(chart: &ChartFrame, seed: u64) -> Result<usize> {
    aperp_dimension_estimate_with_step(chart, seed, FD_STEP)
}

pub fn aperp_dimension_estimate_with_step(
    chart: &ChartFrame,
    seed: u64,
    step: f64,
) -> Result<usize> {
    let sig = chart.signature();
    if sig.p() < 2 || sig.q() < 2 {
        return Err(Error::Unsupported(format!(
            "generic stratum of a⊥ is empty in signature {sig}"
        )));
    }
    let inertia = chart.mu_inertia();
    let mut rng = rng::stream(seed, 3);
    let plus = rng::unit_sphere(&mut rng, inertia.positive);
    let minus = rng::unit_sphere(&mut rng, inertia.negative);
    let alpha = rng::complex_normal(&mut rng);
    let base: Vec<Complex64> = plus.into_iter().chain(minus).collect();

    let m = base.len();
    let n_params = 2 * m + 2;
    let standard = Split::standard(sig);
    // θ perturbs the middle coordinates and α; the negative block is then
    // rescaled onto the cone.
    let embed = |theta: &[f64]| -> Result<Vec<f64>> {
        let mut mid: Vec<Complex64> = base
            .iter()
            .enumerate()
            .map(|(k, c)| c + Complex64::new(theta[2 * k], theta[2 * k + 1]))
            .collect();
        let np: f64 = mid[..inertia.positive].iter().map(|c| c.norm_sqr()).sum();
        let nm: f64 = mid[inertia.positive..].iter().map(|c| c.norm_sqr()).sum();
        let fix = (np / nm).sqrt();
        for c in mid[inertia.positive..].iter_mut() {
            *c *= fix;
        }
        let a = alpha + Complex64::new(theta[2 * m], theta[2 * m + 1]);
        let b = chart.embed(&mid)?.axpy(a, chart.x.vector());
        let rep = canonicalize_phase(&ConePoint::new(b)?, &standard)?;
        Ok(rep.vector().vector().to_interleaved())
    };

    let rows = 2 * sig.n();
    let mut jac = DMatrix::<f64>::zeros(rows, n_params);
    let mut theta = vec![0.0; n_params];
    for k in 0..n_params {
        theta[k] = step;
        let fwd = embed(&theta)?;
        theta[k] = -step;
        let bwd = embed(&theta)?;
        theta[k] = 0.0;
        for i in 0..rows {
            jac[(i, k)] = (fwd[i] - bwd[i]) / (2.0 * step);
        }
    }
    let sv = jac.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    Ok(sv.iter().filter(|s| **s > FD_RANK_TOL * max).count())
}

/// Sample a point of `a⊥`: `αx + y` with `y` isotropic in `M_u` (zero when
/// the middle block has an empty half).
pub fn sample_aperp_point<R: Rng + ?Sized>(chart: &ChartFrame, rng: &mut R) -> Result<ConePoint> {
    let inertia = chart.mu_inertia();
    let alpha = rng::complex_normal(rng);
    let y = if inertia.positive == 0 || inertia.negative == 0 {
        CVector::zeros(chart.signature())
    } else {
        let c = rng::nonzero_scalar(rng);
        let coords: Vec<Complex64> = rng::unit_sphere(rng, inertia.positive)
            .into_iter()
            .chain(rng::unit_sphere(rng, inertia.negative))
            .map(|z| z * c)
            .collect();
        chart.embed(&coords)?
    };
    ConePoint::new(y.axpy(alpha, chart.x.vector()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudoherm::sample_cone_point;
    use crate::quotients::proj_equivalent;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn e1_plus_en(s: Signature) -> ConePoint {
        ConePoint::new(&CVector::basis(s, 0) + &CVector::basis(s, s.n() - 1)).unwrap()
    }

    #[test]
    fn partner_footnote_example() {
        let s = sig(2, 2);
        let x = e1_plus_en(s);
        let u = hyperbolic_partner(&x, Some(&CVector::basis(s, 0))).unwrap();
        let expected =
            CVector::from_pairs(s, &[(0.5, 0.0), (0.0, 0.0), (0.0, 0.0), (-0.5, 0.0)]).unwrap();
        assert!(u.max_abs_diff(&expected) < 1e-15);
        let u = hyperbolic_partner(&x, None).unwrap();
        assert!(u.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partner_rejects_orthogonal_hint() {
        let s = sig(2, 2);
        let x = e1_plus_en(s);
        assert!(matches!(
            hyperbolic_partner(&x, Some(&CVector::basis(s, 1))),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn partner_certificates() {
        for s in Signature::test_battery() {
            for seed in 0..50 {
                let x = sample_cone_point(s, seed);
                let u = hyperbolic_partner(&x, None).unwrap();
                assert!(self_product(&u).abs() < 1e-10);
                assert!((form_unchecked(&u, x.vector()) - ONE).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn witt_basis_of_standard_point() {
        let s = sig(2, 2);
        let basis = extend_to_witt_basis(&e1_plus_en(s)).unwrap();
        for (j, e) in basis.iter().enumerate() {
            assert!(e.max_abs_diff(&CVector::basis(s, j)) < 1e-15, "e{j}");
        }
    }

    #[test]
    fn witt_basis_of_one_i() {
        let s = sig(1, 1);
        let x = ConePoint::new(CVector::from_pairs(s, &[(1.0, 0.0), (0.0, 1.0)]).unwrap()).unwrap();
        let basis = extend_to_witt_basis(&x).unwrap();
        assert_eq!(basis.len(), 2);
        let g = gram(&basis);
        assert!((g - s.eta_matrix()).iter().all(|z| z.norm() < 1e-12));
        assert!((&basis[0] + &basis[1]).max_abs_diff(x.vector()) < 1e-15);
    }

    #[test]
    fn chart_examples() {
        let s = sig(2, 2);
        let chart = make_chart(&e1_plus_en(s)).unwrap();
        assert!(chart.mu_basis()[0].max_abs_diff(&CVector::basis(s, 1)) < 1e-15);
        assert!(chart.mu_basis()[1].max_abs_diff(&CVector::basis(s, 2)) < 1e-15);
        let chart = make_chart(&sample_cone_point(sig(1, 1), 3)).unwrap();
        assert!(chart.mu_basis().is_empty());
    }

    #[test]
    fn chart_rejects_bad_partner() {
        let s = sig(1, 1);
        let x = e1_plus_en(s);
        let err = ChartFrame::new(x, CVector::basis(s, 0), Vec::new());
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn kappa0_examples() {
        let s = sig(2, 2);
        let chart = make_chart(&e1_plus_en(s)).unwrap();
        let k = kappa0(&chart, 0.0, &[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(k.vector().max_abs_diff(chart.u()) < 1e-15);

        // null y = e₂ + e₃
        let k = kappa0(&chart, 0.0, &[ONE, ONE]).unwrap();
        let y = &CVector::basis(s, 1) + &CVector::basis(s, 2);
        assert!(k.vector().max_abs_diff(&(&y + chart.u())) < 1e-15);
        assert!((form_unchecked(chart.x().vector(), k.vector()) - ONE).norm() < 1e-15);

        let s11 = sig(1, 1);
        let chart = make_chart(&e1_plus_en(s11)).unwrap();
        for r in [-3.0, 0.0, 0.25, 10.0] {
            let k = kappa0(&chart, r, &[]).unwrap();
            let expected = CVector::from_pairs(s11, &[(0.5, r), (-0.5, r)]).unwrap();
            assert!(k.vector().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn kappa0_rejects_wrong_coordinate_count() {
        let chart = make_chart(&e1_plus_en(sig(2, 2))).unwrap();
        assert!(matches!(
            kappa0(&chart, 0.0, &[ONE]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn chart_inverse_examples() {
        let s = sig(2, 2);
        let x = e1_plus_en(s);
        let chart = make_chart(&x).unwrap();
        let b = kappa0(&chart, 2.0, &[ONE, c(0.0, 0.0)]).unwrap();
        let beta = form_unchecked(b.vector(), chart.u());
        assert!((beta - c(-0.5, 2.0)).norm() < 1e-15);
        let p = chart_inverse(&chart, &b).unwrap();
        let p = p.point().unwrap();
        assert!((p.r - 2.0).abs() < 1e-15);
        assert!((p.y[0] - ONE).norm() < 1e-15 && p.y[1].norm() < 1e-15);

        assert_eq!(chart_inverse(&chart, &x).unwrap(), ChartInverse::InAperp);
        let b = CVector::basis(s, 1)
            .axpy(ONE, &CVector::basis(s, 2))
            .axpy(c(5.0, 0.0), x.vector());
        let b = ConePoint::new(b).unwrap();
        assert_eq!(chart_inverse(&chart, &b).unwrap(), ChartInverse::InAperp);
    }

    #[test]
    fn kappa_is_injective_on_samples() {
        let s = sig(2, 3);
        let chart = make_chart(&sample_cone_point(s, 11)).unwrap();
        let a = kappa(&chart, 0.5, &[ONE, c(0.2, 0.0), c(0.0, -1.0)]).unwrap();
        let b = kappa(&chart, 0.5 + 1e-3, &[ONE, c(0.2, 0.0), c(0.0, -1.0)]).unwrap();
        assert!(!proj_equivalent(a.vector(), b.vector(), 1e-9));
    }

    #[test]
    fn perp_examples() {
        let s = sig(2, 2);
        let x = sample_cone_point(s, 4);
        let chart = make_chart(&x).unwrap();
        assert!(is_perp(&x, &x, 1e-9));
        let u = ConePoint::new(chart.u().clone()).unwrap();
        assert!(!is_perp(&x, &u, 1e-9));
        assert!(!is_perp(
            &x.scaled(c(3.0, -2.0)).unwrap(),
            &u.scaled(c(0.0, 0.1)).unwrap(),
            1e-9
        ));
    }

    #[test]
    fn classify_examples() {
        let s = sig(2, 2);
        let x = e1_plus_en(s);
        let chart = make_chart(&x).unwrap();
        assert_eq!(aperp_classify(&chart, &x).unwrap(), AperpClass::Apex);

        let b = CVector::basis(s, 1)
            .axpy(ONE, &CVector::basis(s, 2))
            .axpy(c(5.0, 0.0), x.vector());
        match aperp_classify(&chart, &ConePoint::new(b).unwrap()).unwrap() {
            AperpClass::Generic {
                alpha,
                plus_coords,
                minus_coords,
            } => {
                assert!((alpha - c(5.0, 0.0)).norm() < 1e-14);
                assert!((plus_coords[0] - ONE).norm() < 1e-14);
                assert!((minus_coords[0] - ONE).norm() < 1e-14);
            }
            other => panic!("expected generic, got {other:?}"),
        }

        let u = ConePoint::new(chart.u().clone()).unwrap();
        assert!(matches!(aperp_classify(&chart, &u), Err(Error::Domain(_))));
    }

    #[test]
    fn classify_p1_is_always_apex() {
        let s = sig(1, 3);
        let chart = make_chart(&sample_cone_point(s, 2)).unwrap();
        let mut rng = rng::stream(0, 0);
        for _ in 0..20 {
            let b = sample_aperp_point(&chart, &mut rng).unwrap();
            assert_eq!(aperp_classify(&chart, &b).unwrap(), AperpClass::Apex);
        }
    }

    #[test]
    fn dimension_estimate() {
        let chart = make_chart(&sample_cone_point(sig(2, 2), 0)).unwrap();
        assert_eq!(aperp_dimension_estimate(&chart, 1).unwrap(), 3);
        let chart = make_chart(&sample_cone_point(sig(3, 3), 0)).unwrap();
        assert_eq!(aperp_dimension_estimate(&chart, 1).unwrap(), 7);
        let chart = make_chart(&sample_cone_point(sig(1, 2), 0)).unwrap();
        assert!(matches!(
            aperp_dimension_estimate(&chart, 1),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn chart_json_round_trip() {
        let chart = make_chart(&sample_cone_point(sig(2, 3), 8)).unwrap();
        let json = serde_json::to_string(&chart).unwrap();
        let back: ChartFrame = serde_json::from_str(&json).unwrap();
        assert_eq!(back, chart);
        let inv = serde_json::to_value(ChartInverse::InAperp).unwrap();
        assert_eq!(inv, serde_json::json!({"result": "InAperp"}));
    }
}
