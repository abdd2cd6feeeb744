// Torsion-spring stiffness for the three coil counts, and the per-segment
// stiffness of a tapered antenna.

use tactile_antenna::mechanics::{
    catalogue_stiffness_nmm_per_deg, normalized_stiffness, si_to_nmm_per_deg, torsion_stiffness, DiameterProfile,
    SpringSpec,
};
use tactile_antenna::Result;

pub fn run_example() -> Result<()> {
    // Music wire; any fixed geometry gives the same ratios.
    let spec = SpringSpec {
        youngs_modulus: 207e9,
        wire_diameter: 0.2e-3,
        coil_diameter: 1.5e-3,
        active_coils: 3,
    };
    let k3 = torsion_stiffness(&spec)?;
    println!("coils  formula (N*mm/deg)  ratio  catalogue (N*mm/deg)  ratio");
    for coils in [3, 6, 9] {
        let k = torsion_stiffness(&spec.with_coils(coils))?;
        let table = catalogue_stiffness_nmm_per_deg(coils)?;
        println!(
            "{coils:>5}  {:>19.4}  {:>5.3}  {table:>20.3}  {:>5.3}",
            si_to_nmm_per_deg(k),
            k3 / k,
            catalogue_stiffness_nmm_per_deg(3)? / table
        );
    }

    let taper = DiameterProfile::linear_taper(1.0e-3, 0.5e-3, 6)?;
    let ratios = normalized_stiffness(&taper)?;
    println!("\nlinear taper 1.0 -> 0.5 mm, stiffness relative to the base segment:");
    for (d, r) in taper.diameters().iter().zip(&ratios) {
        println!("  d = {:.2} mm  EI/EI_1 = {r:.3}", d * 1e3);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
