//! Randomized verification battery.
//!
//! Each suite checks one property of the constructions over many seeded
//! trials and summarizes the outcome in a [`RunReport`]. Trials run in
//! parallel; every trial draws from its own seed stream and results are
//! collected in trial order, so reports are reproducible.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{
    self, exact_chart_inverse, exact_form_eval, exact_hyperbolic_partner, exact_kappa0,
    exact_kappa_roundtrip, random_qgaussian, random_rational, random_rational_pseudo_unitary,
    ExactChart, QGaussian, QVector,
};
use crate::pseudoherm::{
    form_unchecked, gram, is_isotropic, orthonormalize_indefinite, sample_cone_point_with,
    sample_generator, self_product, CVector, ConePoint, GroupElement, Inertia, Signature,
};
use crate::quotients::{
    angle_diff, canonicalize_phase, canonicalize_ray, proj_equivalent, split_decompose,
    torus_coords, RayRep, Split,
};
use crate::rng::{self, child_seed, StreamRng};
use crate::tangent::{
    adapted_frame, conformal_factor, cotangent_metric_in_basis, cotangent_metric_qtilde,
    cotangent_metric_via_dualization, induced_metric, metric_in_basis, section_metric, skew_form,
    FrameChoice,
};
use crate::witt::{
    aperp_classify, aperp_dimension_estimate_with_step, chart_inverse, extend_to_witt_basis,
    hyperbolic_partner, is_perp, kappa, kappa0, make_chart, sample_aperp_point, AperpClass,
    ChartFrame, ChartInverse,
};

/// Summary of one suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub signature: Signature,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub worst_residual: f64,
    pub threshold: f64,
    pub elapsed_ms: f64,
    /// Details of the first failing trial.
    pub counterexample: Option<Value>,
}

impl RunReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed == self.trials
    }
}

/// Outcome of a single trial. It passes when `holds` and the residual is
/// within the suite threshold; `holds` carries the structural checks
/// (ranks, partitions, secondary tolerances).
struct Trial {
    residual: f64,
    holds: bool,
    detail: Value,
}

impl Trial {
    fn measured(residual: f64, detail: Value) -> Self {
        Trial {
            residual,
            holds: true,
            detail,
        }
    }

    fn passes(&self, threshold: f64) -> bool {
        self.holds && self.residual <= threshold
    }
}

type TrialFn = fn(Signature, &mut StreamRng) -> Result<Trial>;

pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    pub threshold: f64,
    applies: fn(Signature) -> bool,
    trial: TrialFn,
}

impl Suite {
    pub fn applies_to(&self, sig: Signature) -> bool {
        (self.applies)(sig)
    }
}

fn any(_: Signature) -> bool {
    true
}

fn only_one_one(sig: Signature) -> bool {
    sig.p() == 1 && sig.q() == 1
}

fn both_at_least_two(sig: Signature) -> bool {
    sig.p() >= 2 && sig.q() >= 2
}

/// Every suite, in battery order.
pub fn suites() -> &'static [Suite] {
    SUITES
}

pub fn find_suite(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

static SUITES: &[Suite] = &[
    Suite {
        name: "hermitian_symmetry",
        description: "f(v,u) = conj f(u,v)",
        threshold: 1e-12,
        applies: any,
        trial: hermitian_symmetry,
    },
    Suite {
        name: "sesquilinearity",
        description: "f(αu+w, v) = α f(u,v) + f(w,v), relative",
        threshold: 1e-10,
        applies: any,
        trial: sesquilinearity,
    },
    Suite {
        name: "unitary_invariance",
        description: "sampled U is pseudo-unitary and preserves f",
        threshold: 1e-9,
        applies: any,
        trial: unitary_invariance,
    },
    Suite {
        name: "orthonormalize_gram",
        description: "pivoted orthonormalization yields Gram = diag(±1) of the target inertia",
        threshold: 1e-9,
        applies: any,
        trial: orthonormalize_gram,
    },
    Suite {
        name: "cone_sampling",
        description: "sampled cone points are isotropic with equal split norms",
        threshold: 1e-10,
        applies: any,
        trial: cone_sampling,
    },
    Suite {
        name: "cross_section",
        description: "ray representatives lie on Q_s, idempotently and ℝ⁺-invariantly",
        threshold: 1e-9,
        applies: any,
        trial: cross_section,
    },
    Suite {
        name: "sphere_chart",
        description: "x ↦ (x₊, x₋) is a bijection from Q_s onto pairs of unit vectors",
        threshold: 1e-9,
        applies: any,
        trial: sphere_chart,
    },
    Suite {
        name: "phase_retraction",
        description: "phase canonicalization is idempotent and constant on ℂ* orbits",
        threshold: 1e-9,
        applies: any,
        trial: phase_retraction,
    },
    Suite {
        name: "u1_invariance",
        description: "canonicalize_ray(cx) = c·canonicalize_ray(x) for |c| = 1",
        threshold: 1e-9,
        applies: any,
        trial: u1_invariance,
    },
    Suite {
        name: "torus",
        description: "(1,1): ε-frame metric diag(1,−1), U(1) shifts torus angles, zero cometric",
        threshold: 1e-9,
        applies: only_one_one,
        trial: torus,
    },
    Suite {
        name: "lemma1",
        description: "g_{λx} = λ² g_x in the transported frame",
        threshold: 1e-9,
        applies: any,
        trial: lemma1,
    },
    Suite {
        name: "radical",
        description: "ℝx is exactly the radical of f_x on T_xQ",
        threshold: 1e-10,
        applies: any,
        trial: radical,
    },
    Suite {
        name: "signature",
        description: "induced metric has signature (2p−1, 2q−1, 0)",
        threshold: 1e-9,
        applies: any,
        trial: signature,
    },
    Suite {
        name: "lift_independence",
        description: "g_x does not depend on the lifts of Q′ curves",
        threshold: 1e-9,
        applies: any,
        trial: lift_independence,
    },
    Suite {
        name: "conformal",
        description: "metrics from two splits at one Q′ point are positive multiples",
        threshold: 1e-8,
        applies: any,
        trial: conformal,
    },
    Suite {
        name: "cometric_rank",
        description: "cometric on T*Q̃ has rank 2n−4, radical dimension 1, scales as λ⁻²",
        threshold: 1e-9,
        applies: any,
        trial: cometric_rank,
    },
    Suite {
        name: "skew_form",
        description: "F_x is antisymmetric, x is not in its radical, ℂx is in the radical on x⊥",
        threshold: 1e-10,
        applies: any,
        trial: skew_form_suite,
    },
    Suite {
        name: "lemma2",
        description: "Witt basis extension: Gram = η, x = e₁ + eₙ",
        threshold: 1e-9,
        applies: any,
        trial: lemma2,
    },
    Suite {
        name: "kappa_cert",
        description: "κ₀ is isotropic with f(x, κ₀) = 1",
        threshold: 1e-10,
        applies: any,
        trial: kappa_cert,
    },
    Suite {
        name: "chart_target",
        description: "κ never lands in a⊥",
        threshold: 0.0,
        applies: any,
        trial: chart_target,
    },
    Suite {
        name: "kappa_roundtrip",
        description: "chart_inverse ∘ κ = id, κ ∘ chart_inverse fixes classes, κ injective",
        threshold: 1e-9,
        applies: any,
        trial: kappa_roundtrip,
    },
    Suite {
        name: "exact_twin",
        description:
            "partner, κ₀, chart inverse agree with the exact oracle; exact round trip holds",
        threshold: 1e-12,
        applies: any,
        trial: exact_twin,
    },
    Suite {
        name: "aperp_partition",
        description: "a⊥ classification is a partition with normalized generic coordinates",
        threshold: 1e-9,
        applies: any,
        trial: aperp_partition,
    },
    Suite {
        name: "aperp_dimension",
        description: "generic stratum of a⊥ has dimension 2n−5, stable in seed and step",
        threshold: 0.0,
        applies: both_at_least_two,
        trial: aperp_dimension,
    },
    Suite {
        name: "field_axioms",
        description: "ℚ(i) field axioms hold exactly",
        threshold: 0.0,
        applies: any,
        trial: field_axioms,
    },
    Suite {
        name: "twin_agreement",
        description: "exact and floating form and partner evaluations agree",
        threshold: 1e-12,
        applies: any,
        trial: twin_agreement,
    },
];

/// Run a suite over `trials` seeded trials.
pub fn run_suite(name: &str, sig: Signature, seed: u64, trials: usize) -> Result<RunReport> {
    run_suite_with_threshold(name, sig, seed, trials, None)
}

/// As [`run_suite`], with the residual threshold optionally overridden.
pub fn run_suite_with_threshold(
    name: &str,
    sig: Signature,
    seed: u64,
    trials: usize,
    threshold: Option<f64>,
) -> Result<RunReport> {
    let suite =
        find_suite(name).ok_or_else(|| Error::Unsupported(format!("unknown suite {name:?}")))?;
    if !suite.applies_to(sig) {
        return Err(Error::Unsupported(format!(
            "suite {name} does not apply to signature {sig}"
        )));
    }
    Ok(run(
        suite,
        sig,
        seed,
        trials,
        threshold.unwrap_or(suite.threshold),
    ))
}

fn run(suite: &Suite, sig: Signature, seed: u64, trials: usize, threshold: f64) -> RunReport {
    let start = Instant::now();
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = rng::stream(child_seed(seed, k as u64), 0);
            (suite.trial)(sig, &mut rng).unwrap_or_else(|e| Trial {
                residual: f64::INFINITY,
                holds: false,
                detail: json!({ "error": e.to_string() }),
            })
        })
        .collect();
    let passed = outcomes.iter().filter(|t| t.passes(threshold)).count();
    let worst = outcomes.iter().map(|t| t.residual).fold(0.0, f64::max);
    let counterexample = outcomes.iter().enumerate().find(|(_, t)| !t.passes(threshold)).map(|(k, t)| {
        json!({ "trial": k, "trial_seed": child_seed(seed, k as u64), "detail": t.detail })
    });
    RunReport {
        suite: suite.name.to_string(),
        signature: sig,
        seed,
        trials,
        passed,
        failed: trials - passed,
        worst_residual: worst,
        threshold,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        counterexample,
    }
}

/// Every applicable suite for one signature.
pub fn run_all(sig: Signature, seed: u64, trials: usize) -> Vec<RunReport> {
    SUITES
        .iter()
        .filter(|s| s.applies_to(sig))
        .map(|s| run(s, sig, seed, trials, s.threshold))
        .collect()
}

// ---------------------------------------------------------------------------
// helpers

fn random_vector(sig: Signature, rng: &mut StreamRng) -> CVector {
    CVector::new(sig, rng::complex_normal_vec(rng, sig.n())).expect("length n")
}

fn cone(sig: Signature, rng: &mut StreamRng) -> ConePoint {
    sample_cone_point_with(sig, rng)
}

fn random_group(sig: Signature, rng: &mut StreamRng) -> GroupElement {
    let a = sample_generator(sig, rng);
    GroupElement::from_matrix(sig, crate::pseudoherm::expm(&a)).expect("square")
}

fn random_split(sig: Signature, rng: &mut StreamRng) -> Result<Split> {
    Split::transported(&random_group(sig, rng), "random")
}

/// A random element of `T_xQ`: remove the `Re f(·,x)` component along `ηx`.
fn random_tangent(x: &ConePoint, rng: &mut StreamRng) -> CVector {
    let sig = x.signature();
    let xv = x.vector();
    let w = random_vector(sig, rng);
    let jx = CVector::new(
        sig,
        xv.components()
            .iter()
            .enumerate()
            .map(|(j, z)| z * sig.eta(j))
            .collect(),
    )
    .expect("length n");
    let c = form_unchecked(&w, xv).re / xv.norm_sqr();
    w.axpy(Complex64::new(-c, 0.0), &jx)
}

fn random_coords(len: usize, rng: &mut StreamRng) -> Vec<Complex64> {
    rng::complex_normal_vec(rng, len)
}

fn random_r(rng: &mut StreamRng) -> f64 {
    rng.random_range(-5.0..5.0)
}

fn mat_max(a: &nalgebra::DMatrix<f64>) -> f64 {
    a.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// pseudo-Hermitian core

fn hermitian_symmetry(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let u = random_vector(sig, rng);
    let v = random_vector(sig, rng);
    let r = (form_unchecked(&v, &u) - form_unchecked(&u, &v).conj()).norm();
    Ok(Trial::measured(r, json!({ "u": u, "v": v })))
}

fn sesquilinearity(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let u = random_vector(sig, rng);
    let v = random_vector(sig, rng);
    let w = random_vector(sig, rng);
    let alpha = rng::complex_normal(rng);
    let lhs = form_unchecked(&w.axpy(alpha, &u), &v);
    let rhs = alpha * form_unchecked(&u, &v) + form_unchecked(&w, &v);
    let scale = (alpha.norm() * u.norm() + w.norm()) * v.norm();
    // conjugate-linearity in the second slot
    let lhs2 = form_unchecked(&v, &w.axpy(alpha, &u));
    let rhs2 = alpha.conj() * form_unchecked(&v, &u) + form_unchecked(&v, &w);
    let r = ((lhs - rhs).norm().max((lhs2 - rhs2).norm())) / scale;
    Ok(Trial::measured(r, json!({ "alpha": alpha })))
}

fn unitary_invariance(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let g = random_group(sig, rng);
    let u = random_vector(sig, rng);
    let v = random_vector(sig, rng);
    let f0 = form_unchecked(&u, &v);
    let f1 = form_unchecked(&g.apply(&u)?, &g.apply(&v)?);
    let r = ((f1 - f0).norm() / (1.0 + f0.norm())).max(g.isometry_residual());
    Ok(Trial::measured(
        r,
        json!({ "isometry_residual": g.isometry_residual() }),
    ))
}

fn orthonormalize_gram(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    // k columns of a random U span a subspace of known inertia; mix them
    // with a random matrix and add redundant combinations.
    let g = random_group(sig, rng);
    let n = sig.n();
    let k = rng.random_range(1..=n);
    let cols: Vec<usize> = {
        let mut all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            let j = rng.random_range(i..n);
            all.swap(i, j);
        }
        all.truncate(k);
        all
    };
    let pos = cols.iter().filter(|&&j| j < sig.p()).count();
    let target = Inertia::new(pos, k - pos);
    let base: Vec<CVector> = cols.iter().map(|&j| g.column(j)).collect();
    let extra = rng.random_range(0..=2);
    let inputs: Vec<CVector> = (0..k + extra)
        .map(|_| {
            base.iter().fold(CVector::zeros(sig), |acc, b| {
                acc.axpy(rng::complex_normal(rng), b)
            })
        })
        .collect();
    let out = orthonormalize_indefinite(&inputs, target)?;
    let gm = gram(&out);
    let mut r: f64 = 0.0;
    for i in 0..out.len() {
        for j in 0..out.len() {
            let t = if i != j {
                0.0
            } else if i < target.positive {
                1.0
            } else {
                -1.0
            };
            r = r.max((gm[(i, j)] - Complex64::new(t, 0.0)).norm());
        }
    }
    Ok(Trial::measured(r, json!({ "target": target })))
}

fn cone_sampling(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let iso = is_isotropic(x.vector(), 1e-10)?;
    let d = split_decompose(&x, &Split::standard(sig))?;
    let np = self_product(&d.plus);
    let nm = -self_product(&d.minus);
    let r = x.isotropy_residual().max((np - nm).abs() / (np + nm));
    Ok(Trial {
        residual: r,
        holds: iso,
        detail: json!({ "x": x.vector() }),
    })
}

// ---------------------------------------------------------------------------
// quotients

fn cross_section(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let split = if rng.random_bool(0.5) {
        Split::standard(sig)
    } else {
        random_split(sig, rng)?
    };
    let rep = canonicalize_ray(&x, &split)?;
    let norms = (rep.plus_norm() - 1.0)
        .abs()
        .max((rep.minus_norm() - 1.0).abs());
    let again = canonicalize_ray(rep.vector(), &split)?;
    let idempotent = again.vector() == rep.vector();
    let lambda = (rng.random_range(-3.0f64..3.0)).exp();
    let scaled = canonicalize_ray(&x.scaled(Complex64::new(lambda, 0.0))?, &split)?;
    let invariance = scaled.vector().vector().max_abs_diff(rep.vector().vector());
    let r = norms.max(invariance);
    Ok(Trial {
        residual: r,
        holds: idempotent,
        detail: json!({ "x": x.vector(), "split": split.id(), "lambda": lambda, "idempotent": idempotent }),
    })
}

fn sphere_chart(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let split = random_split(sig, rng)?;
    // forward: Q_s point → sphere coordinates → back
    let x = cone(sig, rng);
    let rep = canonicalize_ray(&x, &split)?;
    let (plus, minus) = rep.sphere_coords();
    let np: f64 = plus.iter().map(|c| c.norm_sqr()).sum();
    let nm: f64 = minus.iter().map(|c| c.norm_sqr()).sum();
    let back = RayRep::from_sphere_coords(&split, &plus, &minus)?;
    let r1 = back.vector().vector().max_abs_diff(rep.vector().vector());
    // backward: unit pair → Q_s point → coordinates
    let a = rng::unit_sphere(rng, sig.p());
    let b = rng::unit_sphere(rng, sig.q());
    let built = RayRep::from_sphere_coords(&split, &a, &b)?;
    let (a2, b2) = built.sphere_coords();
    let r2 = a
        .iter()
        .chain(&b)
        .zip(a2.iter().chain(&b2))
        .map(|(s, t)| (s - t).norm())
        .fold(0.0, f64::max);
    let r = r1.max(r2).max((np - 1.0).abs()).max((nm - 1.0).abs());
    Ok(Trial::measured(r, json!({ "x": x.vector() })))
}

fn phase_retraction(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let split = Split::standard(sig);
    let x = cone(sig, rng);
    let a = canonicalize_phase(&x, &split)?;
    let b = canonicalize_phase(a.vector(), &split)?;
    let c = rng::nonzero_scalar(rng);
    let d = canonicalize_phase(&x.scaled(c)?, &split)?;
    let r = a.vector().vector().max_abs_diff(d.vector().vector());
    Ok(Trial {
        residual: r,
        holds: a == b && proj_equivalent(&x, &x.scaled(c)?, 1e-9),
        detail: json!({ "x": x.vector(), "c": c }),
    })
}

fn u1_invariance(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let split = if rng.random_bool(0.5) {
        Split::standard(sig)
    } else {
        random_split(sig, rng)?
    };
    let x = cone(sig, rng);
    let c = rng::unit_phase(rng);
    let a = canonicalize_ray(&x, &split)?;
    let b = canonicalize_ray(&x.scaled(c)?, &split)?;
    let r = b
        .vector()
        .vector()
        .max_abs_diff(&a.vector().vector().scale(c));
    let on_section = (b.plus_norm() - 1.0)
        .abs()
        .max((b.minus_norm() - 1.0).abs());
    Ok(Trial::measured(
        r.max(on_section),
        json!({ "x": x.vector(), "c": c }),
    ))
}

fn torus(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let g = induced_metric(&x, FrameChoice::Epsilon)?;
    let e = g.entries();
    let eps_res = (e[(0, 0)] - 1.0)
        .abs()
        .max((e[(1, 1)] + 1.0).abs())
        .max(e[(0, 1)].abs())
        .max(e[(1, 0)].abs());
    let phi = rng.random_range(0.0..std::f64::consts::TAU);
    let (a0, b0) = torus_coords(&x)?;
    let (a1, b1) = torus_coords(&x.scaled(Complex64::from_polar(1.0, phi))?)?;
    let shift_res = angle_diff(a1 - a0, phi)
        .abs()
        .max(angle_diff(b1 - b0, phi).abs());
    let co = cotangent_metric_qtilde(&x)?;
    let co_res = mat_max(co.entries());
    Ok(Trial {
        residual: shift_res,
        holds: eps_res <= 1e-12 && co.dim() == 1 && co_res <= 1e-10,
        detail: json!({ "x": x.vector(), "epsilon_residual": eps_res, "cometric": co_res }),
    })
}

// ---------------------------------------------------------------------------
// tangent metrics

fn lemma1(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let frame = adapted_frame(&x)?;
    let labels = frame.quotient_labels().to_vec();
    let g = metric_in_basis(&x, frame.quotient_basis(), labels.clone())?;
    let gn = g.entries().norm();
    let mut worst: f64 = 0.0;
    for lambda in [0.5, 2.0, 3.7] {
        let lx = x.scaled(Complex64::new(lambda, 0.0))?;
        let gl = metric_in_basis(&lx, &frame.lifted_quotient_basis(lambda), labels.clone())?;
        let diff = (gl.entries() - g.entries() * (lambda * lambda)).norm();
        worst = worst.max(diff / gn);
    }
    Ok(Trial::measured(worst, json!({ "x": x.vector() })))
}

fn radical(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let z = random_tangent(&x, rng);
    let r = form_unchecked(x.vector(), &z).re.abs();
    // the radical of f_x on all of T_xQ is exactly the line ℝx
    let frame = adapted_frame(&x)?;
    let labels = vec![String::new(); frame.tangent_basis().len()];
    let full = metric_in_basis(&x, frame.tangent_basis(), labels)?;
    let expected = (2 * sig.p() - 1, 2 * sig.q() - 1, 1);
    let radical_is_x =
        full.radical_basis().len() == 1 && full.radical_basis()[0][0].abs() > 1.0 - 1e-9;
    Ok(Trial {
        residual: r,
        holds: full.signature() == expected && radical_is_x,
        detail: json!({ "x": x.vector(), "signature": full.signature() }),
    })
}

fn signature(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let g = induced_metric(&x, FrameChoice::Adapted)?;
    let expected = (2 * sig.p() - 1, 2 * sig.q() - 1, 0);
    Ok(Trial {
        residual: 0.0,
        holds: g.signature() == expected,
        detail: json!({ "x": x.vector(), "signature": g.signature() }),
    })
}

fn lift_independence(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let a = random_tangent(&x, rng);
    let b = random_tangent(&x, rng);
    let s: f64 = rng.random_range(-10.0..10.0);
    let t: f64 = rng.random_range(-10.0..10.0);
    let a2 = a.axpy(Complex64::new(s, 0.0), x.vector());
    let b2 = b.axpy(Complex64::new(t, 0.0), x.vector());
    let g1 = form_unchecked(&a, &b).re;
    let g2 = form_unchecked(&a2, &b2).re;
    let scale = a2.norm() * b2.norm();
    Ok(Trial::measured(
        (g1 - g2).abs() / scale,
        json!({ "s": s, "t": t }),
    ))
}

fn conformal(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let s1 = random_split(sig, rng)?;
    let s2 = random_split(sig, rng)?;
    let frame = adapted_frame(&x)?;
    let labels = frame.quotient_labels().to_vec();
    let g1 = section_metric(&x, &s1, frame.quotient_basis(), labels.clone())?;
    let g2 = section_metric(&x, &s2, frame.quotient_basis(), labels)?;
    let (c, resid) = conformal_factor(&g1, &g2)?;
    Ok(Trial {
        residual: resid,
        holds: c > 0.0,
        detail: json!({ "x": x.vector(), "factor": c }),
    })
}

fn cometric_rank(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let g = cotangent_metric_qtilde(&x)?;
    let n = sig.n();
    let sv = g.entries().singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|s| **s > 1e-9 * smax.max(1.0)).count();
    let rank_ok = rank == 2 * n - 4 && g.dim() - rank == 1 && g.radical_basis().len() == 1;
    let zero_ok = n != 2 || mat_max(g.entries()) <= 1e-10;

    // contravariant scaling under x ↦ λx
    let frame = adapted_frame(&x)?;
    let lambda = 2.0;
    let lx = x.scaled(Complex64::new(lambda, 0.0))?;
    let gl = cotangent_metric_in_basis(
        &lx,
        &frame.lifted_quotient_basis(lambda),
        frame.quotient_labels(),
    )?;
    let gn = g.entries().norm().max(1.0);
    let scale_res = (gl.entries() - g.entries() / (lambda * lambda)).norm() / gn;
    // independent route through f* = ι f₁⁻¹ ι*
    let dual = cotangent_metric_via_dualization(&x)?;
    let route_res = (dual.entries() - g.entries()).norm() / gn;
    let r = scale_res.max(route_res);
    Ok(Trial {
        residual: r,
        holds: rank_ok && zero_ok,
        detail: json!({ "x": x.vector(), "rank": rank, "dim": g.dim() }),
    })
}

fn skew_form_suite(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    // work on Q_s so that |F_x(x, Y)| for unit Y is scale free
    let x = canonicalize_ray(&cone(sig, rng), &Split::standard(sig))?
        .vector()
        .clone();
    let xv = x.vector();
    let a = random_tangent(&x, rng);
    let b = random_tangent(&x, rng);
    let anti = (skew_form(&x, &a, &b)? + skew_form(&x, &b, &a)?).abs() / (a.norm() * b.norm());

    // x is not in the radical of F_x on T_xQ
    let best = (0..64)
        .map(|_| {
            let y = random_tangent(&x, rng);
            skew_form(&x, xv, &y).map(|f| f.abs() / y.norm())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    // ℂx = span{x, ix} pairs trivially with x⊥ under F_x
    let frame = adapted_frame(&x)?;
    let ix = xv.scale(Complex64::new(0.0, 1.0));
    let yperp = frame.tangent_basis()[3..]
        .iter()
        .fold(CVector::zeros(sig), |acc, v| {
            acc.axpy(Complex64::new(rng::complex_normal(rng).re, 0.0), v)
        })
        .axpy(rng::complex_normal(rng), xv);
    let descend = if yperp.norm() > 0.0 {
        (skew_form(&x, &ix, &yperp)?.abs() + skew_form(&x, xv, &yperp)?.abs())
            / (xv.norm() * yperp.norm())
    } else {
        0.0
    };
    let r = anti.max(descend);
    Ok(Trial {
        residual: r,
        holds: best >= 0.5,
        detail: json!({ "x": x.vector(), "max_F_x_unit_y": best }),
    })
}

// ---------------------------------------------------------------------------
// Witt charts

fn lemma2(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let x = cone(sig, rng);
    let basis = extend_to_witt_basis(&x)?;
    let gram_res = (gram(&basis) - sig.eta_matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let sum_res = (&basis[0] + &basis[sig.n() - 1]).max_abs_diff(x.vector());
    Ok(Trial {
        residual: gram_res,
        holds: sum_res <= 1e-12,
        detail: json!({ "x": x.vector(), "gram_residual": gram_res, "sum_residual": sum_res }),
    })
}

fn random_chart_input(chart: &ChartFrame, rng: &mut StreamRng) -> (f64, Vec<Complex64>) {
    (random_r(rng), random_coords(chart.mu_basis().len(), rng))
}

fn kappa_cert(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let chart = make_chart(&cone(sig, rng))?;
    let (r, y) = random_chart_input(&chart, rng);
    let k = kappa0(&chart, r, &y)?;
    let iso = self_product(k.vector()).abs();
    let norm = (form_unchecked(chart.x().vector(), k.vector()) - Complex64::new(1.0, 0.0)).norm();
    Ok(Trial::measured(iso.max(norm), json!({ "r": r, "y": y })))
}

fn chart_target(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let chart = make_chart(&cone(sig, rng))?;
    let (r, y) = random_chart_input(&chart, rng);
    let k = kappa(&chart, r, &y)?;
    let inside = !is_perp(chart.x(), k.vector(), crate::tol::DEFAULT_TOL);
    Ok(Trial {
        residual: 0.0,
        holds: inside && chart_inverse(&chart, k.vector())? != ChartInverse::InAperp,
        detail: json!({ "r": r, "y": y }),
    })
}

fn kappa_roundtrip(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let chart = make_chart(&cone(sig, rng))?;
    let (r, y) = random_chart_input(&chart, rng);
    let k = kappa(&chart, r, &y)?;
    let back = chart_inverse(&chart, k.vector())?;
    let Some(p) = back.point() else {
        return Ok(Trial {
            residual: f64::INFINITY,
            holds: false,
            detail: json!({ "r": r, "y": y, "inverse": "InAperp" }),
        });
    };
    let scale = 1.0 + r.abs() + y.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let forward = ((p.r - r).abs()).max(
        p.y.iter()
            .zip(&y)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max),
    ) / scale;

    // a random class outside a⊥ is fixed by κ ∘ chart_inverse
    let b = cone(sig, rng);
    let fixed = match chart_inverse(&chart, &b)? {
        ChartInverse::Point(q) => proj_equivalent(kappa(&chart, q.r, &q.y)?.vector(), &b, 1e-9),
        ChartInverse::InAperp => true,
    };
    // injectivity on a distinct pair
    let (r2, y2) = random_chart_input(&chart, rng);
    let k2 = kappa(&chart, r2, &y2)?;
    let injective = !proj_equivalent(k.vector(), k2.vector(), 1e-9);
    Ok(Trial {
        residual: forward,
        holds: fixed && injective,
        detail: json!({ "r": r, "y": y, "fixed": fixed, "injective": injective }),
    })
}

fn rational_chart(sig: Signature, rng: &mut StreamRng) -> Result<ExactChart> {
    let cols = random_rational_pseudo_unitary(sig, rng);
    ExactChart::standard(sig).transported(&cols)
}

fn exact_twin(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let chart_q = rational_chart(sig, rng)?;
    let c = random_qgaussian(rng);
    let c = if c.is_zero() { QGaussian::one() } else { c };
    let xq = chart_q.x().scale(&c);
    let xf = ConePoint::new(xq.to_cvector())?;
    let rel = |q: &QVector, f: &CVector| exact::max_abs_diff(q, f) / f.norm().max(1.0);

    let u_res = rel(
        &exact_hyperbolic_partner(&xq, None)?,
        &hyperbolic_partner(&xf, None)?,
    );

    // κ₀ and its inverse are compared on identical, exactly representable
    // inputs: the float chart and its exact dyadic copy
    let chart_f = chart_q.to_float()?;
    let chart_e = ExactChart::from_float(&chart_f)
        .ok_or_else(|| Error::InternalContract("non-finite chart".into()))?;
    let dyadic = |z: Complex64| QGaussian::from_complex(z).expect("finite");
    let r = random_rational(rng);
    let y: Vec<QGaussian> = (0..sig.n() - 2).map(|_| random_qgaussian(rng)).collect();
    let rf = rq_to_f64(&r);
    let yf: Vec<Complex64> = y.iter().map(QGaussian::to_complex).collect();
    let yd: Vec<QGaussian> = yf.iter().map(|z| dyadic(*z)).collect();
    let kq = exact_kappa0(&chart_e, &dyadic(Complex64::new(rf, 0.0)).re, &yd)?;
    let kf = kappa0(&chart_f, rf, &yf)?;
    let k_res = rel(&kq, kf.vector());

    let c2 = rng::nonzero_scalar(rng);
    let bf = kf.scaled(c2)?;
    let bq = QVector::from_cvector(bf.vector()).expect("finite");
    let inv_res = match (
        exact_chart_inverse(&chart_e, &bq)?,
        chart_inverse(&chart_f, &bf)?,
    ) {
        (Some((rq, yq)), ChartInverse::Point(p)) => {
            // the inverse is a set of inner products with z = b/f(b,x);
            // measure against their term size
            let z = bf.vector().norm() / form_unchecked(bf.vector(), chart_f.x().vector()).norm();
            let frame = chart_f
                .mu_basis()
                .iter()
                .map(CVector::norm)
                .fold(chart_f.u().norm(), f64::max);
            let scale = 1.0 + z * frame;
            let mut d = (rq_to_f64(&rq) - p.r).abs();
            for (a, b) in yq.iter().zip(&p.y) {
                d = d.max((a.to_complex() - b).norm());
            }
            d / scale
        }
        (None, ChartInverse::InAperp) => 0.0,
        _ => f64::INFINITY,
    };
    let roundtrip = exact_kappa_roundtrip(&chart_q, &r, &y)?;
    let res = u_res.max(k_res).max(inv_res);
    Ok(Trial {
        residual: res,
        holds: roundtrip,
        detail: json!({ "partner": u_res, "kappa0": k_res, "inverse": inv_res, "exact_roundtrip": roundtrip }),
    })
}

fn rq_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn aperp_partition(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let chart = make_chart(&cone(sig, rng))?;
    let inertia = chart.mu_inertia();
    let want_apex = inertia.positive == 0 || inertia.negative == 0 || rng.random_bool(0.2);
    let b = if want_apex {
        chart.x().scaled(rng::nonzero_scalar(rng))?
    } else {
        sample_aperp_point(&chart, rng)?
    };
    let class = aperp_classify(&chart, &b)?;
    let (ok, residual) = match (&class, want_apex) {
        (AperpClass::Apex, true) => (true, 0.0),
        (
            AperpClass::Generic {
                alpha,
                plus_coords,
                minus_coords,
            },
            false,
        ) => {
            let np: f64 = plus_coords.iter().map(|c| c.norm_sqr()).sum();
            let nm: f64 = minus_coords.iter().map(|c| c.norm_sqr()).sum();
            let all: Vec<Complex64> = plus_coords.iter().chain(minus_coords).copied().collect();
            let piv = crate::pseudoherm::pivot_index(&all);
            let gauge = all[piv].im.abs() + if all[piv].re > 0.0 { 0.0 } else { 1.0 };
            // the normalized data still represents the class of b
            let rebuilt = chart.embed(&all)?.axpy(*alpha, chart.x().vector());
            let same = proj_equivalent(&ConePoint::new(rebuilt)?, &b, 1e-9);
            let r = (np - 1.0).abs().max((nm - 1.0).abs()).max(gauge);
            (same, r)
        }
        _ => (false, f64::INFINITY),
    };
    Ok(Trial {
        residual,
        holds: ok,
        detail: json!({ "b": b.vector(), "class": class, "expected_apex": want_apex }),
    })
}

fn aperp_dimension(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let chart = make_chart(&cone(sig, rng))?;
    let seed: u64 = rng.random();
    let expected = 2 * sig.n() - 5;
    let dims: Vec<usize> = [1e-4, 1e-5, 1e-6]
        .iter()
        .map(|h| aperp_dimension_estimate_with_step(&chart, seed, *h))
        .collect::<Result<_>>()?;
    let ok = dims.iter().all(|d| *d == expected);
    Ok(Trial {
        residual: if ok { 0.0 } else { 1.0 },
        holds: ok,
        detail: json!({ "dims": dims, "expected": expected }),
    })
}

// ---------------------------------------------------------------------------
// exact oracle

fn field_axioms(_sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let a = random_qgaussian(rng);
    let b = random_qgaussian(rng);
    let c = random_qgaussian(rng);
    let mut ok = &(&a + &b) + &c == &a + &(&b + &c)
        && &(&a * &b) * &c == &a * &(&b * &c)
        && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
        && &a * &b == &b * &a
        && &a + &b == &b + &a
        && (&a + &(-&a)).is_zero()
        && &a * &QGaussian::one() == a;
    if let Some(inv) = a.inv() {
        ok &= &a * &inv == QGaussian::one();
    } else {
        ok &= a.is_zero();
    }
    Ok(Trial {
        residual: if ok { 0.0 } else { 1.0 },
        holds: ok,
        detail: json!({ "a": a, "b": b, "c": c }),
    })
}

fn twin_agreement(sig: Signature, rng: &mut StreamRng) -> Result<Trial> {
    let u = QVector::new(sig, (0..sig.n()).map(|_| random_qgaussian(rng)).collect())?;
    let v = QVector::new(sig, (0..sig.n()).map(|_| random_qgaussian(rng)).collect())?;
    let fq = exact_form_eval(&u, &v)?;
    let (uf, vf) = (u.to_cvector(), v.to_cvector());
    let ff = form_unchecked(&uf, &vf);
    let sym = exact_form_eval(&v, &u)? == fq.conj();
    let form_res = (fq.to_complex() - ff).norm() / (uf.norm() * vf.norm()).max(1.0);

    // partner with an explicit hint at a rational cone point
    let chart = rational_chart(sig, rng)?;
    let x = chart.x();
    let hint = if exact_form_eval(&u, x)?.is_zero() {
        chart.u().clone()
    } else {
        u
    };
    let pq = exact_hyperbolic_partner(x, Some(&hint))?;
    let pf = hyperbolic_partner(&ConePoint::new(x.to_cvector())?, Some(&hint.to_cvector()))?;
    let partner_res = exact::max_abs_diff(&pq, &pf) / pf.norm().max(1.0);
    let r = form_res.max(partner_res);
    Ok(Trial {
        residual: r,
        holds: sym,
        detail: json!({ "v": v, "form": form_res, "partner": partner_res }),
    })
}
