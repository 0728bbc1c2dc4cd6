//! Sample points of the isotropic cone and pseudo-unitary maps, and check
//! that the maps preserve the form.
//!
//!     cargo run --example cone_sampling -- 2 3

use coneq::pseudoherm::{
    form_eval, is_isotropic, sample_cone_point, sample_pseudo_unitary, Signature,
};

fn main() -> coneq::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let sig = Signature::new(*args.first().unwrap_or(&2), *args.get(1).unwrap_or(&2))?;
    println!(
        "signature {sig}, η = diag{:?}",
        (0..sig.n()).map(|j| sig.eta(j)).collect::<Vec<_>>()
    );

    let g = sample_pseudo_unitary(sig, 1);
    println!(
        "pseudo-unitary sample: ‖U*ηU − η‖ = {:.2e}",
        g.isometry_residual()
    );

    for seed in 0..5 {
        let x = sample_cone_point(sig, seed);
        let y = sample_cone_point(sig, seed + 100);
        let gx = g.apply(x.vector())?;
        let gy = g.apply(y.vector())?;
        let before = form_eval(x.vector(), y.vector())?;
        let after = form_eval(&gx, &gy)?;
        println!(
            "seed {seed}: f(x,x) = {:+.1e}  Ux isotropic: {}  |f(Ux,Uy) − f(x,y)| = {:.1e}",
            x.isotropy_residual(),
            is_isotropic(&gx, 1e-9)?,
            (after - before).norm()
        );
    }
    Ok(())
}
