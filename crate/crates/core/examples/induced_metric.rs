//! The metric induced on `Q′`: adapted frame, signature, the scaling law
//! under `x ↦ λx`, and conformal invariance across splits.

use coneq::pseudoherm::{sample_cone_point, sample_pseudo_unitary, Signature};
use coneq::quotients::Split;
use coneq::tangent::{
    adapted_frame, conformal_factor, induced_metric, metric_in_basis, section_metric, FrameChoice,
};
use num_complex::Complex64;

fn main() -> coneq::Result<()> {
    let sig = Signature::new(2, 2)?;
    let x = sample_cone_point(sig, 3);
    let g = induced_metric(&x, FrameChoice::Adapted)?;
    println!("basis {:?}", g.basis_labels());
    println!(
        "G_x ={:.4}signature (+, −, 0) = {:?}",
        g.entries(),
        g.signature()
    );

    let frame = adapted_frame(&x)?;
    let labels = frame.quotient_labels().to_vec();
    for lambda in [0.5, 2.0, 3.7] {
        let lx = x.scaled(Complex64::new(lambda, 0.0))?;
        let gl = metric_in_basis(&lx, &frame.lifted_quotient_basis(lambda), labels.clone())?;
        let err = (gl.entries() - g.entries() * (lambda * lambda)).norm() / g.entries().norm();
        println!("λ = {lambda}: ‖G_λx − λ²G_x‖/‖G_x‖ = {err:.1e}");
    }

    let s1 = Split::standard(sig);
    let s2 = Split::transported(&sample_pseudo_unitary(sig, 11), "boosted")?;
    let g1 = section_metric(&x, &s1, frame.quotient_basis(), labels.clone())?;
    let g2 = section_metric(&x, &s2, frame.quotient_basis(), labels)?;
    let (c, resid) = conformal_factor(&g1, &g2)?;
    println!("metrics from two splits: G₂ = {c:.6}·G₁ (relative residual {resid:.1e})");

    let t = Signature::new(1, 1)?;
    let e = induced_metric(&sample_cone_point(t, 0), FrameChoice::Epsilon)?;
    println!("(1,1) in the ε frame:{:.3}", e.entries());
    Ok(())
}
