//! Witt bases and the κ chart `ℝ × M_u → Q̃ \ a⊥`.

use coneq::pseudoherm::{form_eval, gram, sample_cone_point, Signature};
use coneq::witt::{chart_inverse, extend_to_witt_basis, kappa, kappa0, make_chart, ChartInverse};
use num_complex::Complex64;

fn main() -> coneq::Result<()> {
    let sig = Signature::new(2, 3)?;
    let x = sample_cone_point(sig, 2);
    let basis = extend_to_witt_basis(&x)?;
    let gram_err = (gram(&basis) - sig.eta_matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    let sum_err = (&basis[0] + &basis[sig.n() - 1]).max_abs_diff(x.vector());
    println!("Witt basis: ‖Gram − η‖∞ = {gram_err:.1e}, ‖e₁ + eₙ − x‖∞ = {sum_err:.1e}");

    let chart = make_chart(&x)?;
    println!("M_u inertia {:?}", chart.mu_inertia());
    let r = 0.75;
    let y = vec![
        Complex64::new(0.3, -1.0),
        Complex64::new(2.0, 0.5),
        Complex64::new(-0.4, 0.0),
    ];
    let k0 = kappa0(&chart, r, &y)?;
    println!(
        "κ₀: f(κ₀,κ₀) = {:+.1e}, f(x,κ₀) = {:.12}",
        k0.isotropy_residual(),
        form_eval(x.vector(), k0.vector())?
    );

    let class = kappa(&chart, r, &y)?;
    match chart_inverse(&chart, class.vector())? {
        ChartInverse::Point(p) => println!("recovered r = {:.12}, y = {:.12?}", p.r, p.y),
        ChartInverse::InAperp => println!("unexpected: landed in a⊥"),
    }
    println!("x itself: {:?}", chart_inverse(&chart, &x)?);
    Ok(())
}
