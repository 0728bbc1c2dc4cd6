//! Exact arithmetic over the Gaussian rationals `ℚ(i)`.
//!
//! This is the independent twin of the floating-point constructions: it
//! evaluates the form, hyperbolic partners, `κ₀` and its inverse with no
//! rounding at all. Nothing here takes square roots, so orthonormalization
//! is out of reach; charts must come with exactly orthonormal data (for
//! instance the standard chart moved by a rational Cayley transform).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudoherm::{CVector, Signature};
use crate::witt::ChartFrame;

/// `re + i·im` with arbitrary-precision rational parts (always reduced).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QGaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl QGaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        QGaussian { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        QGaussian::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn from_fracs((rn, rd): (i64, i64), (in_, id): (i64, i64)) -> Self {
        QGaussian::new(
            BigRational::new(rn.into(), rd.into()),
            BigRational::new(in_.into(), id.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        QGaussian::new(re, BigRational::zero())
    }

    pub fn zero() -> Self {
        QGaussian::from_ints(0, 0)
    }

    pub fn one() -> Self {
        QGaussian::from_ints(1, 0)
    }

    pub fn i() -> Self {
        QGaussian::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        QGaussian::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let d = self.norm_sqr();
        Some(QGaussian::new(&self.re / &d, -&self.im / &d))
    }

    /// Exact conversion: every finite double is a dyadic rational.
    pub fn from_complex(z: Complex64) -> Option<Self> {
        Some(QGaussian::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for QGaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, -&self.im)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_ratio(s: &str) -> std::result::Result<BigRational, String> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

impl Serialize for QGaussian {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [ratio_string(&self.re), ratio_string(&self.im)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for QGaussian {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [re, im] = <[String; 2]>::deserialize(d)?;
        Ok(QGaussian::new(
            parse_ratio(&re).map_err(de::Error::custom)?,
            parse_ratio(&im).map_err(de::Error::custom)?,
        ))
    }
}

impl Add for &QGaussian {
    type Output = QGaussian;
    fn add(self, o: &QGaussian) -> QGaussian {
        QGaussian::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &QGaussian {
    type Output = QGaussian;
    fn sub(self, o: &QGaussian) -> QGaussian {
        QGaussian::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &QGaussian {
    type Output = QGaussian;
    fn mul(self, o: &QGaussian) -> QGaussian {
        QGaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for &QGaussian {
    type Output = QGaussian;
    /// Panics on division by zero, like the rational division it wraps.
    fn div(self, o: &QGaussian) -> QGaussian {
        self * &o.inv().expect("division by zero in ℚ(i)")
    }
}

impl Neg for &QGaussian {
    type Output = QGaussian;
    fn neg(self) -> QGaussian {
        QGaussian::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QGaussian {
            type Output = QGaussian;
            fn $m(self, o: QGaussian) -> QGaussian {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QGaussian {
    type Output = QGaussian;
    fn neg(self) -> QGaussian {
        -&self
    }
}

/// A vector of `H_{p,q}` with Gaussian-rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QVector {
    signature: Signature,
    components: Vec<QGaussian>,
}

impl QVector {
    pub fn new(signature: Signature, components: Vec<QGaussian>) -> Result<Self> {
        if components.len() != signature.n() {
            return Err(Error::DimensionMismatch {
                expected: signature.n(),
                found: components.len(),
            });
        }
        Ok(QVector {
            signature,
            components,
        })
    }

    pub fn zeros(signature: Signature) -> Self {
        QVector {
            signature,
            components: vec![QGaussian::zero(); signature.n()],
        }
    }

    pub fn basis(signature: Signature, j: usize) -> Self {
        let mut v = Self::zeros(signature);
        v.components[j] = QGaussian::one();
        v
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn components(&self) -> &[QGaussian] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(QGaussian::is_zero)
    }

    pub fn scale(&self, c: &QGaussian) -> Self {
        QVector {
            signature: self.signature,
            components: self.components.iter().map(|z| z * c).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: &QGaussian, other: &QVector) -> Self {
        QVector {
            signature: self.signature,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + &(c * b))
                .collect(),
        }
    }

    pub fn from_cvector(v: &CVector) -> Option<Self> {
        Some(QVector {
            signature: v.signature(),
            components: v
                .components()
                .iter()
                .map(|z| QGaussian::from_complex(*z))
                .collect::<Option<_>>()?,
        })
    }

    pub fn to_cvector(&self) -> CVector {
        CVector::new(
            self.signature,
            self.components.iter().map(QGaussian::to_complex).collect(),
        )
        .expect("length matches signature")
    }
}

fn check_same(u: &QVector, v: &QVector) -> Result<()> {
    if u.signature != v.signature {
        return Err(Error::SignatureMismatch {
            expected: u.signature,
            found: v.signature,
        });
    }
    Ok(())
}

fn form(u: &QVector, v: &QVector) -> QGaussian {
    let sig = u.signature;
    u.components.iter().zip(&v.components).enumerate().fold(
        QGaussian::zero(),
        |acc, (j, (a, b))| {
            let t = a * &b.conj();
            if sig.eta(j) > 0.0 {
                &acc + &t
            } else {
                &acc - &t
            }
        },
    )
}

/// `f(u,v)` evaluated exactly.
pub fn exact_form_eval(u: &QVector, v: &QVector) -> Result<QGaussian> {
    check_same(u, v)?;
    Ok(form(u, v))
}

/// `f(x,x) = 0` as an identity of rationals.
pub fn exact_isotropy(x: &QVector) -> bool {
    form(x, x).is_zero()
}

/// `u = v′ − ½ f(v′,v′) x` with `v′ = v / f(v,x)`; `v` is the hint or the
/// standard basis vector of largest `|x_j|` (lowest index among ties).
pub fn exact_hyperbolic_partner(x: &QVector, hint: Option<&QVector>) -> Result<QVector> {
    if x.is_zero() {
        return Err(Error::DegenerateInput("zero vector".into()));
    }
    let v = match hint {
        Some(h) => {
            check_same(x, h)?;
            h.clone()
        }
        None => {
            let norms: Vec<BigRational> = x.components.iter().map(QGaussian::norm_sqr).collect();
            let mut best = 0;
            for (j, nj) in norms.iter().enumerate() {
                if nj > &norms[best] {
                    best = j;
                }
            }
            QVector::basis(x.signature, best)
        }
    };
    let pairing = form(&v, x);
    let inv = pairing
        .inv()
        .ok_or_else(|| Error::Domain("hint is orthogonal to x".into()))?;
    let v1 = v.scale(&inv);
    let half = BigRational::new(1.into(), 2.into());
    let s = form(&v1, &v1);
    Ok(v1.axpy(&QGaussian::new(-&s.re * &half, BigRational::zero()), x))
}

/// Chart data over `ℚ(i)`; `certified` records whether the frame
/// invariants hold exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactChart {
    x: QVector,
    u: QVector,
    mu_basis: Vec<QVector>,
    certified: bool,
}

impl ExactChart {
    /// Validating constructor: `f(u,u) = 0`, `f(u,x) = 1`, `mu_basis`
    /// orthonormal with `p−1` positive vectors first and orthogonal to `x`, `u`,
    /// all exactly.
    pub fn new(x: QVector, u: QVector, mu_basis: Vec<QVector>) -> Result<Self> {
        let mut chart = ExactChart::from_parts(x, u, mu_basis)?;
        if !chart.check_exact() {
            return Err(Error::Unsupported(
                "chart data is not exactly orthonormal".into(),
            ));
        }
        chart.certified = true;
        Ok(chart)
    }

    /// Unvalidated chart data, usable for twin evaluation of floating charts.
    pub fn from_parts(x: QVector, u: QVector, mu_basis: Vec<QVector>) -> Result<Self> {
        check_same(&x, &u)?;
        for m in &mu_basis {
            check_same(&x, m)?;
        }
        if mu_basis.len() + 2 != x.signature.n() {
            return Err(Error::DimensionMismatch {
                expected: x.signature.n() - 2,
                found: mu_basis.len(),
            });
        }
        Ok(ExactChart {
            x,
            u,
            mu_basis,
            certified: false,
        })
    }

    /// Chart at `x = e₁ + eₙ` with `u = (e₁ − eₙ)/2` and the standard middle.
    pub fn standard(sig: Signature) -> Self {
        let n = sig.n();
        let half = QGaussian::from_fracs((1, 2), (0, 1));
        let x = QVector::basis(sig, 0).axpy(&QGaussian::one(), &QVector::basis(sig, n - 1));
        let u = QVector::basis(sig, 0)
            .axpy(&-QGaussian::one(), &QVector::basis(sig, n - 1))
            .scale(&half);
        let mu = (1..n - 1).map(|j| QVector::basis(sig, j)).collect();
        ExactChart::new(x, u, mu).expect("standard chart is exact")
    }

    /// Exact copy of a floating chart. Orthonormalized data is almost never
    /// exactly orthonormal, so the result is usually uncertified.
    pub fn from_float(chart: &ChartFrame) -> Option<Self> {
        let x = QVector::from_cvector(chart.x().vector())?;
        let u = QVector::from_cvector(chart.u())?;
        let mu = chart
            .mu_basis()
            .iter()
            .map(QVector::from_cvector)
            .collect::<Option<Vec<_>>>()?;
        let mut c = ExactChart::from_parts(x, u, mu).ok()?;
        c.certified = c.check_exact();
        Some(c)
    }

    /// Apply a matrix given by its columns to every frame vector.
    pub fn transported(&self, columns: &[QVector]) -> Result<Self> {
        let apply = |v: &QVector| {
            v.components
                .iter()
                .zip(columns)
                .fold(QVector::zeros(v.signature), |acc, (c, col)| {
                    acc.axpy(c, col)
                })
        };
        let x = apply(&self.x);
        let u = apply(&self.u);
        let mu = self.mu_basis.iter().map(apply).collect();
        ExactChart::new(x, u, mu)
    }

    pub fn x(&self) -> &QVector {
        &self.x
    }

    pub fn u(&self) -> &QVector {
        &self.u
    }

    pub fn mu_basis(&self) -> &[QVector] {
        &self.mu_basis
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn to_float(&self) -> Result<ChartFrame> {
        ChartFrame::new(
            crate::pseudoherm::ConePoint::new(self.x.to_cvector())?,
            self.u.to_cvector(),
            self.mu_basis.iter().map(QVector::to_cvector).collect(),
        )
    }

    fn mu_positive(&self) -> usize {
        self.x.signature.p() - 1
    }

    fn mu_sign(&self, k: usize) -> bool {
        k < self.mu_positive()
    }

    fn check_exact(&self) -> bool {
        if !form(&self.u, &self.u).is_zero() || form(&self.u, &self.x) != QGaussian::one() {
            return false;
        }
        for (i, a) in self.mu_basis.iter().enumerate() {
            if !form(a, &self.x).is_zero() || !form(a, &self.u).is_zero() {
                return false;
            }
            for (j, b) in self.mu_basis.iter().enumerate() {
                let expected = match (i == j, self.mu_sign(i)) {
                    (false, _) => QGaussian::zero(),
                    (true, true) => QGaussian::one(),
                    (true, false) => -QGaussian::one(),
                };
                if form(a, b) != expected {
                    return false;
                }
            }
        }
        true
    }

    fn embed(&self, y: &[QGaussian]) -> Result<QVector> {
        if y.len() != self.mu_basis.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mu_basis.len(),
                found: y.len(),
            });
        }
        Ok(y.iter()
            .zip(&self.mu_basis)
            .fold(QVector::zeros(self.x.signature), |acc, (c, m)| {
                acc.axpy(c, m)
            }))
    }
}

/// `κ₀(r, y) = y + u + (−½ f(y,y) + r i) x`, exactly.
pub fn exact_kappa0(chart: &ExactChart, r: &BigRational, y: &[QGaussian]) -> Result<QVector> {
    let yv = chart.embed(y)?;
    let half = BigRational::new(1.into(), 2.into());
    let beta = QGaussian::new(-(&form(&yv, &yv).re * &half), r.clone());
    Ok(yv.axpy(&QGaussian::one(), &chart.u).axpy(&beta, &chart.x))
}

/// Exact chart inverse: `None` when `f(b,x) = 0` exactly (the class lies in `a⊥`).
pub fn exact_chart_inverse(
    chart: &ExactChart,
    b: &QVector,
) -> Result<Option<(BigRational, Vec<QGaussian>)>> {
    check_same(&chart.x, b)?;
    let Some(inv) = form(b, &chart.x).inv() else {
        return Ok(None);
    };
    let z = b.scale(&inv);
    let beta = form(&z, &chart.u);
    let y = chart
        .mu_basis
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let c = form(&z, m);
            if chart.mu_sign(k) {
                c
            } else {
                -c
            }
        })
        .collect();
    Ok(Some((beta.im, y)))
}

/// Compute `κ₀(r,y)` exactly, re-extract `(r,y)`, and report whether the
/// round trip is the identity and `f(κ₀,κ₀) = 0`, `f(x,κ₀) = 1` hold exactly.
pub fn exact_kappa_roundtrip(chart: &ExactChart, r: &BigRational, y: &[QGaussian]) -> Result<bool> {
    if !chart.certified {
        return Err(Error::Unsupported(
            "exact round trip needs exactly orthonormal chart data".into(),
        ));
    }
    let k = exact_kappa0(chart, r, y)?;
    if !exact_isotropy(&k) || form(&chart.x, &k) != QGaussian::one() {
        return Ok(false);
    }
    Ok(match exact_chart_inverse(chart, &k)? {
        Some((r2, y2)) => &r2 == r && y2.as_slice() == y,
        None => false,
    })
}

/// A small random Gaussian rational: numerators in `[-9, 9]`, denominators
/// in `1..=4`.
pub fn random_qgaussian<R: Rng + ?Sized>(rng: &mut R) -> QGaussian {
    let mut part = || {
        BigRational::new(
            rng.random_range(-9i64..=9).into(),
            rng.random_range(1i64..=4).into(),
        )
    };
    let re = part();
    let im = part();
    QGaussian::new(re, im)
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    BigRational::new(
        rng.random_range(-30i64..=30).into(),
        rng.random_range(1i64..=7).into(),
    )
}

/// Solve `M X = B` over `ℚ(i)` by Gauss–Jordan elimination; `None` if `M`
/// is singular. Matrices are row-major `Vec<Vec<_>>`.
pub fn solve(m: &[Vec<QGaussian>], b: &[Vec<QGaussian>]) -> Option<Vec<Vec<QGaussian>>> {
    let n = m.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<QGaussian>> = m
        .iter()
        .zip(b)
        .map(|(r, s)| r.iter().chain(s).cloned().collect())
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        let inv = a[c][c].inv()?;
        a[c] = a[c].iter().map(|z| z * &inv).collect();
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let row_c = a[c].clone();
                a[r] = a[r]
                    .iter()
                    .zip(&row_c)
                    .map(|(z, w)| z - &(&f * w))
                    .collect();
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..n + cols].to_vec()).collect())
}

/// Columns of the Cayley transform `(I − A)(I + A)⁻¹` of a random rational
/// η-anti-Hermitian `A`: an exactly pseudo-unitary rational matrix.
/// Generator entries are kept small so the result stays cheap to work with.
pub fn random_rational_pseudo_unitary<R: Rng + ?Sized>(
    sig: Signature,
    rng: &mut R,
) -> Vec<QVector> {
    let n = sig.n();
    let small = |rng: &mut R| {
        let mut part = || {
            BigRational::new(
                rng.random_range(-2i64..=2).into(),
                rng.random_range(1i64..=2).into(),
            )
        };
        let re = part();
        QGaussian::new(re, part())
    };
    loop {
        // B anti-Hermitian, A = ηB
        let mut b = vec![vec![QGaussian::zero(); n]; n];
        for i in 0..n {
            b[i][i] = QGaussian::new(BigRational::zero(), small(rng).im);
            for j in (i + 1)..n {
                let z = small(rng);
                b[j][i] = -z.conj();
                b[i][j] = z;
            }
        }
        let a: Vec<Vec<QGaussian>> = b
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if sig.eta(i) > 0.0 {
                    row.clone()
                } else {
                    row.iter().map(|z| -z).collect()
                }
            })
            .collect();
        let ident = |i: usize, j: usize| {
            if i == j {
                QGaussian::one()
            } else {
                QGaussian::zero()
            }
        };
        // (I − A)(I + A)⁻¹ = (I + A)⁻¹(I − A) since the factors commute.
        let plus: Vec<Vec<QGaussian>> = (0..n)
            .map(|i| (0..n).map(|j| &ident(i, j) + &a[i][j]).collect())
            .collect();
        let minus: Vec<Vec<QGaussian>> = (0..n)
            .map(|i| (0..n).map(|j| &ident(i, j) - &a[i][j]).collect())
            .collect();
        if let Some(c) = solve(&plus, &minus) {
            return (0..n)
                .map(|j| QVector {
                    signature: sig,
                    components: (0..n).map(|i| c[i][j].clone()).collect(),
                })
                .collect();
        }
    }
}

/// Largest `|a − b|` over the components, in floating point.
pub fn max_abs_diff(a: &QVector, b: &CVector) -> f64 {
    a.components
        .iter()
        .zip(b.components())
        .map(|(q, z)| (q.to_complex() - z).norm())
        .fold(0.0, f64::max)
}

/// `|r|` as a float, for scale estimates.
pub fn abs_f64(r: &BigRational) -> f64 {
    r.abs().to_f64().unwrap_or(f64::INFINITY)
}

impl One for QGaussian {
    fn one() -> Self {
        QGaussian::one()
    }
}

impl Zero for QGaussian {
    fn zero() -> Self {
        QGaussian::zero()
    }

    fn is_zero(&self) -> bool {
        QGaussian::is_zero(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn qv(s: Signature, comps: &[(i64, i64)]) -> QVector {
        QVector::new(
            s,
            comps
                .iter()
                .map(|&(a, b)| QGaussian::from_ints(a, b))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn form_examples() {
        let s = sig(1, 1);
        let one = qv(s, &[(1, 0), (1, 0)]);
        assert!(exact_form_eval(&one, &one).unwrap().is_zero());
        let u = qv(s, &[(2, 1), (1, 0)]);
        let v = qv(s, &[(1, 0), (0, 1)]);
        assert_eq!(exact_form_eval(&u, &v).unwrap(), QGaussian::from_ints(2, 2));
        assert_eq!(
            exact_form_eval(&v, &u).unwrap(),
            QGaussian::from_ints(2, -2)
        );
        assert!(exact_form_eval(&u, &QVector::zeros(sig(2, 1))).is_err());
    }

    #[test]
    fn isotropy_examples() {
        let s = sig(1, 1);
        assert!(exact_isotropy(&qv(s, &[(1, 0), (1, 0)])));
        assert!(!exact_isotropy(&qv(s, &[(1, 0), (0, 0)])));
        assert!(exact_isotropy(&qv(s, &[(3, 4), (5, 0)])));
    }

    #[test]
    fn partner_for_one_i() {
        let s = sig(1, 1);
        let x = qv(s, &[(1, 0), (0, 1)]);
        let u = exact_hyperbolic_partner(&x, None).unwrap();
        assert!(exact_isotropy(&u));
        assert_eq!(form(&u, &x), QGaussian::one());
    }

    #[test]
    fn kappa_roundtrip_examples() {
        let chart = ExactChart::standard(sig(2, 2));
        let zero = BigRational::zero();
        let z = QGaussian::zero();
        assert!(exact_kappa_roundtrip(&chart, &zero, &[z.clone(), z.clone()]).unwrap());
        assert_eq!(
            exact_kappa0(&chart, &zero, &[z.clone(), z.clone()]).unwrap(),
            *chart.u()
        );

        let one = QGaussian::one();
        assert!(exact_kappa_roundtrip(
            &chart,
            &BigRational::from_integer(2.into()),
            &[one.clone(), one]
        )
        .unwrap());

        let r = BigRational::new(7.into(), 3.into());
        let y = [QGaussian::from_ints(3, 0), z];
        let k = exact_kappa0(&chart, &r, &y).unwrap();
        let beta = form(&k, chart.u());
        assert_eq!(
            beta,
            QGaussian::new(BigRational::new((-9).into(), 2.into()), r.clone())
        );
        assert!(exact_kappa_roundtrip(&chart, &r, &y).unwrap());
    }

    #[test]
    fn uncertified_chart_is_rejected() {
        let s = sig(1, 1);
        let x = qv(s, &[(1, 0), (1, 0)]);
        let bad = ExactChart::new(x.clone(), QVector::basis(s, 0), Vec::new());
        assert!(matches!(bad, Err(Error::Unsupported(_))));
        let raw = ExactChart::from_parts(x, QVector::basis(s, 0), Vec::new()).unwrap();
        assert!(matches!(
            exact_kappa_roundtrip(&raw, &BigRational::zero(), &[]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cayley_transform_is_pseudo_unitary() {
        let mut rng = rng::stream(1, 0);
        for s in Signature::test_battery() {
            let cols = random_rational_pseudo_unitary(s, &mut rng);
            for (i, a) in cols.iter().enumerate() {
                for (j, b) in cols.iter().enumerate() {
                    let expected = if i != j {
                        QGaussian::zero()
                    } else if s.eta(i) > 0.0 {
                        QGaussian::one()
                    } else {
                        -QGaussian::one()
                    };
                    assert_eq!(form(a, b), expected);
                }
            }
            let chart = ExactChart::standard(s).transported(&cols).unwrap();
            assert!(chart.is_certified());
        }
    }

    #[test]
    fn json_encoding() {
        let z = QGaussian::from_fracs((3, 4), (-1, 2));
        let v = serde_json::to_value(&z).unwrap();
        assert_eq!(v, serde_json::json!(["3/4", "-1/2"]));
        let back: QGaussian = serde_json::from_value(v).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_value::<QGaussian>(serde_json::json!(["1/0", "0"])).is_err());
    }

    #[test]
    fn float_conversion_is_exact() {
        let z = Complex64::new(0.1, -3.75);
        let q = QGaussian::from_complex(z).unwrap();
        assert_eq!(q.to_complex(), z);
        assert!(QGaussian::from_complex(Complex64::new(f64::NAN, 0.0)).is_none());
    }
}
