//! The boundary `a⊥` missed by a chart: apex, generic stratum, dimension.

use coneq::pseudoherm::{sample_cone_point, Signature};
use coneq::rng;
use coneq::witt::{
    aperp_classify, aperp_dimension_estimate, make_chart, sample_aperp_point, AperpClass,
};
use num_complex::Complex64;

fn main() -> coneq::Result<()> {
    for (p, q) in [(2, 2), (2, 3), (3, 3)] {
        let sig = Signature::new(p, q)?;
        let chart = make_chart(&sample_cone_point(sig, 1))?;
        let mut g = rng::stream(7, 0);

        let apex = aperp_classify(&chart, &chart.x().scaled(Complex64::new(0.0, -2.0))?)?;
        let b = sample_aperp_point(&chart, &mut g)?;
        let kind = match aperp_classify(&chart, &b)? {
            AperpClass::Apex => "apex".to_string(),
            AperpClass::Generic {
                alpha,
                plus_coords,
                minus_coords,
            } => format!(
                "generic, α = {alpha:.3}, |v₊|² = {:.12}, |v₋|² = {:.12}",
                plus_coords.iter().map(|c| c.norm_sqr()).sum::<f64>(),
                minus_coords.iter().map(|c| c.norm_sqr()).sum::<f64>()
            ),
        };
        println!("{sig}: −2i·x → {apex:?}; sample → {kind}");
        println!(
            "{sig}: generic stratum dimension {} (2n−5 = {})",
            aperp_dimension_estimate(&chart, 3)?,
            2 * sig.n() - 5
        );
    }
    Ok(())
}
