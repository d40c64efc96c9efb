//! How the discriminants encode the null geometry: ψ(t, μ) tables at a
//! large speed, showing the indicator limits 1 (null), 0 (alternative),
//! and the boundary behavior.
//!
//! Run with: `cargo run --release --example dirichlet_limits`

use nullprop::families::FamilyModel;
use nullprop::kernels::{ComposedKernel, NullSpec, SeriesConfig};
use nullprop::numerics::{
    dirichlet_halfline, dirichlet_window, QuadratureConfig, WeightFunction,
};

fn main() -> nullprop::Result<()> {
    let quad = QuadratureConfig::default();
    let t = 300.0;

    println!("raw Dirichlet windows at t = {t} (limits 1 / 1/2 / 0):");
    for mu in [-2.0, -1.0, 0.5, 2.0, 3.0] {
        let w = dirichlet_window(t, mu, -1.0, 2.0, &quad)?;
        println!("  window(mu = {mu:>4}) on (-1, 2) = {w:+.4}");
    }
    for mu in [-1.0, 0.0, 1.0] {
        let h = dirichlet_halfline(t, mu, 0.0, &quad)?;
        println!("  half-line(mu = {mu:>4}) at b = 0 = {h:+.4}");
    }

    let family = FamilyModel::gaussian(1.0)?;
    let bounded = ComposedKernel::new(
        NullSpec::bounded(-1.0, 2.0)?,
        &family,
        WeightFunction::Triangular,
        SeriesConfig::default(),
        quad,
    )?;
    println!("\ncomposed bounded-null discriminant (boundary counts as alternative):");
    println!("  mu      psi     1-psi");
    for mu in [-2.0, -1.0, 0.5, 2.0, 3.0] {
        let psi = bounded.psi(t, mu)?;
        println!("  {mu:>4}  {psi:+.4}  {:+.4}", 1.0 - psi);
    }

    let one_sided = ComposedKernel::new(
        NullSpec::one_sided(0.0),
        &family,
        WeightFunction::Triangular,
        SeriesConfig::default(),
        quad,
    )?;
    println!("\ncomposed one-sided discriminant at b = 0:");
    println!("  mu      psi     1-psi");
    for mu in [-1.0, -0.2, 0.0, 0.2, 1.0] {
        let psi = one_sided.psi(t, mu)?;
        println!("  {mu:>4}  {psi:+.4}  {:+.4}", 1.0 - psi);
    }
    Ok(())
}
