//! The degenerate cotangent metric on `Q̃` and the skew form `F_x`.

use coneq::pseudoherm::{sample_cone_point, CVector, Signature};
use coneq::tangent::{
    adapted_frame, cotangent_metric_qtilde, cotangent_metric_via_dualization, skew_form,
};
use num_complex::Complex64;

fn main() -> coneq::Result<()> {
    for (p, q) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
        let sig = Signature::new(p, q)?;
        let x = sample_cone_point(sig, 5);
        let g = cotangent_metric_qtilde(&x)?;
        let dual = cotangent_metric_via_dualization(&x)?;
        println!(
            "{sig}: dim T*Q̃ = {}, rank {} (2n−4 = {}), radical {}, routes agree to {:.1e}",
            g.dim(),
            g.rank(),
            (2 * sig.n()).saturating_sub(4),
            g.radical_basis().len(),
            (g.entries() - dual.entries()).norm()
        );
    }

    let sig = Signature::new(2, 2)?;
    let x = sample_cone_point(sig, 6);
    let frame = adapted_frame(&x)?;
    let e1 = &frame.witt_basis()[0];
    let ie1 = e1.scale(Complex64::new(0.0, 1.0));
    let ix: CVector = x.vector().scale(Complex64::new(0.0, 1.0));
    println!("F_x(x, ie₁) = {:+.6}", skew_form(&x, x.vector(), &ie1)?);
    println!("F_x(x, ix)  = {:+.6}", skew_form(&x, x.vector(), &ix)?);
    Ok(())
}
