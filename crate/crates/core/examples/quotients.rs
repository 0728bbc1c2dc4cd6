//! Representatives of `Q′ = Q/ℝ⁺` and `Q̃ = Q/ℂ*`, and the (1,1) torus.

use coneq::pseudoherm::{sample_cone_point, sample_pseudo_unitary, CVector, ConePoint, Signature};
use coneq::quotients::{
    canonicalize_phase, canonicalize_ray, proj_equivalent, split_decompose, torus_coords, Split,
};
use num_complex::Complex64;

fn main() -> coneq::Result<()> {
    let sig = Signature::new(2, 3)?;
    let x = sample_cone_point(sig, 4);
    let standard = Split::standard(sig);
    let other = Split::transported(&sample_pseudo_unitary(sig, 9), "boosted")?;

    for split in [&standard, &other] {
        let d = split_decompose(&x, split)?;
        let ray = canonicalize_ray(&x, split)?;
        println!(
            "split {:>8}: R = {:.6}, on Q_s: f(x₊,x₊) = {:.15}, −f(x₋,x₋) = {:.15}",
            split.id(),
            d.radius,
            ray.plus_norm(),
            ray.minus_norm()
        );
    }

    let p = canonicalize_phase(&x, &standard)?;
    println!(
        "Q̃ representative (pivot {}): {:?}",
        p.pivot_index(),
        p.vector().vector().components()
    );
    let c = Complex64::new(-1.5, 0.25);
    println!(
        "x ~ ({c})·x in Q̃: {}",
        proj_equivalent(&x, &x.scaled(c)?, 1e-9)
    );

    // (1,1): Q′ is a torus and U(1) moves both angles together
    let t = Signature::new(1, 1)?;
    let z = ConePoint::new(CVector::from_pairs(t, &[(0.0, 1.0), (-1.0, 0.0)])?)?;
    for k in 0..4 {
        let phi = k as f64 * 0.5;
        let (a, b) = torus_coords(&z.scaled(Complex64::from_polar(1.0, phi))?)?;
        println!("e^({phi}i)·z ↦ (φ₁, φ₂) = ({a:.4}, {b:.4})");
    }
    Ok(())
}
