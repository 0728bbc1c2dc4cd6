//! Exact arithmetic over `ℚ(i)`: rational pseudo-unitary charts and the
//! κ round trip without rounding.

use coneq::exact::{
    exact_chart_inverse, exact_kappa0, exact_kappa_roundtrip, random_rational_pseudo_unitary,
    ExactChart, QGaussian,
};
use coneq::pseudoherm::Signature;
use coneq::rng;
use coneq::witt::{chart_inverse, kappa0, ChartInverse};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() -> coneq::Result<()> {
    let sig = Signature::new(2, 2)?;
    let mut g = rng::stream(5, 0);
    let chart =
        ExactChart::standard(sig).transported(&random_rational_pseudo_unitary(sig, &mut g))?;
    println!(
        "certified rational chart, x = [{}]",
        join(chart.x().components())
    );

    let r = BigRational::new(BigInt::from(7), BigInt::from(3));
    let y = vec![
        QGaussian::from_fracs((1, 2), (-3, 4)),
        QGaussian::from_ints(2, 1),
    ];
    let k = exact_kappa0(&chart, &r, &y)?;
    println!("κ₀ = [{}]", join(k.components()));
    if let Some((r2, y2)) = exact_chart_inverse(&chart, &k)? {
        println!("inverse: r = {r2}, y = [{}]", join(&y2));
    }
    println!(
        "exact round trip: {}",
        exact_kappa_roundtrip(&chart, &r, &y)?
    );

    let float_chart = chart.to_float()?;
    let kf = kappa0(
        &float_chart,
        7.0 / 3.0,
        &y.iter().map(QGaussian::to_complex).collect::<Vec<_>>(),
    )?;
    if let ChartInverse::Point(p) = chart_inverse(&float_chart, &kf)? {
        println!("floating twin: r = {:.17}", p.r);
    }
    Ok(())
}

fn join(v: &[QGaussian]) -> String {
    v.iter()
        .map(|z| z.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
