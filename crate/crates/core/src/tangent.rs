//! Tangent spaces of the cone and the metrics they induce on `Q′` and `Q̃`.
//!
//! At `x ∈ Q` the real tangent space is `T_xQ = {X : Re f(X,x) = 0}` and
//! `f_x(X,Y) = Re f(X,Y)` has radical `ℝx`, so it descends to a metric
//! `g_x` on `T Q′` of signature `(2p−1, 2q−1)`. Quotients are represented
//! concretely by bases of complements of `ℝx`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::pseudoherm::{form_unchecked, CVector, ConePoint};
use crate::quotients::Split;
use crate::tol::{DEFAULT_TOL, RANK_TOL};
use crate::witt::extend_to_witt_basis;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Frame of `T_xQ` built from a Witt basis with `x = e₁ + eₙ`:
/// `f₁ = x`, `f₂ = ix`, `f₃ = i(e₁ − eₙ)`, then `e_j, ie_j` for the middle
/// vectors. Dropping `f₁` gives a basis of `T Q′`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    x: ConePoint,
    witt_basis: Vec<CVector>,
    tangent_basis: Vec<CVector>,
    labels: Vec<String>,
}

impl AdaptedFrame {
    pub fn x(&self) -> &ConePoint {
        &self.x
    }

    pub fn witt_basis(&self) -> &[CVector] {
        &self.witt_basis
    }

    /// `2n − 1` vectors spanning `T_xQ`.
    pub fn tangent_basis(&self) -> &[CVector] {
        &self.tangent_basis
    }

    /// `2n − 2` vectors whose classes span `T Q′` at `P′(x)`.
    pub fn quotient_basis(&self) -> &[CVector] {
        &self.tangent_basis[1..]
    }

    pub fn quotient_labels(&self) -> &[String] {
        &self.labels[1..]
    }

    /// Tangent vectors at `λx` representing the same `T Q′` vectors as the
    /// quotient basis at `x`: a lift `t ↦ x(t)` through `x` gives the lift
    /// `t ↦ λx(t)` through `λx`, with velocity scaled by `λ`.
    pub fn lifted_quotient_basis(&self, lambda: f64) -> Vec<CVector> {
        self.quotient_basis()
            .iter()
            .map(|v| v.scale_real(lambda))
            .collect()
    }

    /// Largest violation of: tangency `Re f(X,x) = 0`, Gram(witt) = η,
    /// and `e₁ + eₙ = x`.
    pub fn residual(&self) -> f64 {
        let xv = self.x.vector();
        let xn = xv.norm();
        let tangency = self
            .tangent_basis
            .iter()
            .map(|v| form_unchecked(v, xv).re.abs() / (v.norm() * xn))
            .fold(0.0, f64::max);
        let sig = self.x.signature();
        let gram_res = (crate::pseudoherm::gram(&self.witt_basis) - sig.eta_matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let n = self.witt_basis.len();
        let sum_res =
            (&self.witt_basis[0] + &self.witt_basis[n - 1]).max_abs_diff(xv) / xn.max(1.0);
        tangency.max(gram_res).max(sum_res)
    }
}

pub fn adapted_frame(x: &ConePoint) -> Result<AdaptedFrame> {
    let witt = extend_to_witt_basis(x)?;
    let n = witt.len();
    let xv = x.vector();
    let mut tangent_basis = vec![xv.clone(), xv.scale(I), (&witt[0] - &witt[n - 1]).scale(I)];
    let mut labels: Vec<String> = vec!["x".into(), "ix".into(), format!("i(e1-e{n})")];
    for (j, e) in witt.iter().enumerate().take(n - 1).skip(1) {
        tangent_basis.push(e.clone());
        tangent_basis.push(e.scale(I));
        labels.push(format!("e{}", j + 1));
        labels.push(format!("ie{}", j + 1));
    }
    Ok(AdaptedFrame {
        x: x.clone(),
        witt_basis: witt,
        tangent_basis,
        labels,
    })
}

/// A real symmetric bilinear form in an explicit basis, with its
/// eigen-signature `(n₊, n₋, n₀)` and a basis of its radical.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    entries: DMatrix<f64>,
    basis_labels: Vec<String>,
    signature: (usize, usize, usize),
    radical_basis: Vec<Vec<f64>>,
}

struct Spectrum {
    signature: (usize, usize, usize),
    radical: Vec<Vec<f64>>,
}

fn spectrum(entries: &DMatrix<f64>, tol: f64) -> Spectrum {
    if entries.nrows() == 0 {
        return Spectrum {
            signature: (0, 0, 0),
            radical: Vec::new(),
        };
    }
    let eig = SymmetricEigen::new(entries.clone());
    let scale = eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
    // absolute floor: a matrix of pure round-off is entirely radical
    let thr = tol * scale.max(1.0);
    let mut sig = (0, 0, 0);
    let mut radical = Vec::new();
    for (k, l) in eig.eigenvalues.iter().enumerate() {
        if *l > thr {
            sig.0 += 1;
        } else if *l < -thr {
            sig.1 += 1;
        } else {
            sig.2 += 1;
            radical.push(eig.eigenvectors.column(k).iter().copied().collect());
        }
    }
    Spectrum {
        signature: sig,
        radical,
    }
}

impl MetricMatrix {
    /// Symmetrizes `entries` exactly (mean of the two triangles) and
    /// computes the signature and radical at [`RANK_TOL`].
    pub fn from_entries(entries: DMatrix<f64>, basis_labels: Vec<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        if basis_labels.len() != entries.nrows() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: basis_labels.len(),
            });
        }
        let k = entries.nrows();
        let sym = DMatrix::from_fn(k, k, |i, j| 0.5 * (entries[(i, j)] + entries[(j, i)]));
        let eig = spectrum(&sym, RANK_TOL);
        Ok(MetricMatrix {
            entries: sym,
            basis_labels,
            signature: eig.signature,
            radical_basis: eig.radical,
        })
    }

    fn with_radical(mut self, radical_basis: Vec<Vec<f64>>) -> Self {
        self.radical_basis = radical_basis;
        self
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn signature(&self) -> (usize, usize, usize) {
        self.signature
    }

    pub fn rank(&self) -> usize {
        self.signature.0 + self.signature.1
    }

    pub fn radical_basis(&self) -> &[Vec<f64>] {
        &self.radical_basis
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest singular value (the spectral norm).
    pub fn norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.entries
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }
}

impl Serialize for MetricMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = self
            .entries
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect();
        let mut st = s.serialize_struct("MetricMatrix", 4)?;
        st.serialize_field("entries", &rows)?;
        st.serialize_field("basis_labels", &self.basis_labels)?;
        st.serialize_field("signature", &self.signature)?;
        st.serialize_field("radical_basis", &self.radical_basis)?;
        st.end()
    }
}

/// Eigenvalue counts `> tol·‖G‖`, `< −tol·‖G‖`, and in between.
pub fn metric_signature(g: &MetricMatrix, tol: f64) -> (usize, usize, usize) {
    spectrum(&g.entries, tol).signature
}

fn check_tangent(x: &ConePoint, v: &CVector) -> Result<()> {
    if v.signature() != x.signature() {
        return Err(Error::SignatureMismatch {
            expected: x.signature(),
            found: v.signature(),
        });
    }
    let xv = x.vector();
    if form_unchecked(v, xv).re.abs() > DEFAULT_TOL * v.norm() * xv.norm() {
        return Err(Error::Domain(
            "vector is not tangent to the cone at x".into(),
        ));
    }
    Ok(())
}

/// `[Re f(v_i, v_j)]` for tangent vectors `v_i ∈ T_xQ`.
pub fn metric_in_basis(
    x: &ConePoint,
    vectors: &[CVector],
    labels: Vec<String>,
) -> Result<MetricMatrix> {
    for v in vectors {
        check_tangent(x, v)?;
    }
    let k = vectors.len();
    let entries = DMatrix::from_fn(k, k, |i, j| form_unchecked(&vectors[i], &vectors[j]).re);
    MetricMatrix::from_entries(entries, labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameChoice {
    /// The quotient basis of [`AdaptedFrame`].
    Adapted,
    /// `{ie₁, ie₂}` of the Witt basis; signature (1,1) only.
    Epsilon,
}

pub fn induced_metric(x: &ConePoint, frame: FrameChoice) -> Result<MetricMatrix> {
    let af = adapted_frame(x)?;
    match frame {
        FrameChoice::Adapted => {
            metric_in_basis(x, af.quotient_basis(), af.quotient_labels().to_vec())
        }
        FrameChoice::Epsilon => {
            let sig = x.signature();
            if sig.n() != 2 {
                return Err(Error::UnsupportedFrame(format!(
                    "epsilon frame needs signature (1,1), got {sig}"
                )));
            }
            let vectors: Vec<CVector> = af.witt_basis.iter().map(|e| e.scale(I)).collect();
            metric_in_basis(x, &vectors, vec!["eps1=ie1".into(), "eps2=ie2".into()])
        }
    }
}

/// The metric `g_s` that `Q′` receives from the cross-section `Q_s`.
///
/// `vectors` are tangent at `x` and stand for vectors of `T Q′` at `P′(x)`.
/// They are carried to the representative `x_s = x/R` on `Q_s`, corrected by
/// multiples of `x_s` into `T Q_s` (where `Re f(X₊,x₊) = Re f(X₋,x₋) = 0`),
/// and paired there.
pub fn section_metric(
    x: &ConePoint,
    split: &Split,
    vectors: &[CVector],
    labels: Vec<String>,
) -> Result<MetricMatrix> {
    for v in vectors {
        check_tangent(x, v)?;
    }
    let rep = crate::quotients::canonicalize_ray(x, split)?;
    let xs = rep.vector().vector();
    let lambda = xs.norm() / x.vector().norm();
    let p = split.signature().p();
    let xc = split.coefficients(xs);
    let lifted: Vec<CVector> = vectors
        .iter()
        .map(|v| {
            let w = v.scale_real(lambda);
            let wc = split.coefficients(&w);
            let t: f64 = wc[..p]
                .iter()
                .zip(&xc[..p])
                .map(|(a, b)| (a * b.conj()).re)
                .sum();
            w.axpy(Complex64::new(-t, 0.0), xs)
        })
        .collect();
    metric_in_basis(rep.vector(), &lifted, labels)
}

/// Best `c` with `G₂ ≈ c·G₁` (least squares) and the relative residual
/// `‖G₂ − cG₁‖_F / ‖G₂‖_F`.
pub fn conformal_factor(g1: &MetricMatrix, g2: &MetricMatrix) -> Result<(f64, f64)> {
    if g1.dim() != g2.dim() {
        return Err(Error::DimensionMismatch {
            expected: g1.dim(),
            found: g2.dim(),
        });
    }
    let dot = g1.entries.dot(&g2.entries);
    let n1 = g1.entries.norm_squared();
    if n1 == 0.0 {
        return Err(Error::DegenerateInput("reference metric vanishes".into()));
    }
    let c = dot / n1;
    let resid = (&g2.entries - &g1.entries * c).norm() / g2.entries.norm();
    Ok((c, resid))
}

/// `F_x(X,Y) = Im f(X,Y)` for `X, Y ∈ T_xQ`.
pub fn skew_form(x: &ConePoint, a: &CVector, b: &CVector) -> Result<f64> {
    check_tangent(x, a)?;
    check_tangent(x, b)?;
    Ok(form_unchecked(a, b).im)
}

/// Contravariant metric on `T*Q̃` from a quotient basis whose first member
/// is the vertical (U(1)-orbit) direction: invert `g_x`, then restrict to
/// covectors that annihilate the vertical vector.
pub fn cotangent_metric_in_basis(
    x: &ConePoint,
    vectors: &[CVector],
    labels: &[String],
) -> Result<MetricMatrix> {
    let g = metric_in_basis(x, vectors, labels.to_vec())?;
    let inv = g
        .entries
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("induced metric on T Q′ is not invertible".into()))?;
    let k = inv.nrows() - 1;
    let sub = inv.view((1, 1), (k, k)).into_owned();
    let dual_labels = labels[1..].iter().map(|l| format!("d({l})")).collect();
    MetricMatrix::from_entries(sub, dual_labels)
}

/// The degenerate cometric on `T*Q̃` at `P(x)`, in the dual of the adapted
/// frame modulo the vertical direction `ix`.
pub fn cotangent_metric_qtilde(x: &ConePoint) -> Result<MetricMatrix> {
    let af = adapted_frame(x)?;
    cotangent_metric_in_basis(x, af.quotient_basis(), af.quotient_labels())
}

/// The same cometric from the image of `x⊥` alone: `W = T Q̃` with the basis
/// `{i(e₁−eₙ), e_j, ie_j}`, `W₁` the span of the middle vectors (the image of
/// `x⊥`), `f₁` the restriction of `Re f`, dualized with [`dualize_degenerate`].
pub fn cotangent_metric_via_dualization(x: &ConePoint) -> Result<MetricMatrix> {
    let af = adapted_frame(x)?;
    let middle = &af.tangent_basis[3..];
    let k = middle.len();
    let w_dim = k + 1;
    let f1 = DMatrix::from_fn(k, k, |i, j| form_unchecked(&middle[i], &middle[j]).re);
    let inclusion = DMatrix::from_fn(w_dim, k, |i, j| if i == j + 1 { 1.0 } else { 0.0 });
    let m = dualize_degenerate(w_dim, &inclusion, &f1)?;
    let labels = af.quotient_labels()[1..]
        .iter()
        .map(|l| format!("d({l})"))
        .collect();
    Ok(MetricMatrix {
        basis_labels: labels,
        ..m
    })
}

/// `f* = ι ∘ f₁⁻¹ ∘ ι*` as a symmetric form on `W*`. The radical returned
/// alongside is `ker ιᵀ`: the covectors vanishing on `ι(W₁)`.
pub fn dualize_degenerate(
    w_dim: usize,
    inclusion: &DMatrix<f64>,
    f1: &DMatrix<f64>,
) -> Result<MetricMatrix> {
    let k = f1.nrows();
    if f1.ncols() != k || inclusion.ncols() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: inclusion.ncols(),
        });
    }
    if inclusion.nrows() != w_dim {
        return Err(Error::DimensionMismatch {
            expected: w_dim,
            found: inclusion.nrows(),
        });
    }
    let f1_eig = spectrum(f1, RANK_TOL);
    if k > 0 && f1_eig.signature.2 > 0 {
        return Err(Error::Singular("f1 is degenerate".into()));
    }
    let ker_incl = spectrum(&(inclusion.transpose() * inclusion), RANK_TOL);
    if k > 0 && ker_incl.signature.2 > 0 {
        return Err(Error::Domain("inclusion is not injective".into()));
    }
    let f1_inv = f1
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Singular("f1 is not invertible".into()))?;
    let dual = inclusion * f1_inv * inclusion.transpose();
    let radical = spectrum(&(inclusion * inclusion.transpose()), RANK_TOL).radical;
    let labels = (0..w_dim).map(|i| format!("w*{}", i + 1)).collect();
    Ok(MetricMatrix::from_entries(dual, labels)?.with_radical(radical))
}
