//! Builds the two-bump Airy phantom and writes its strain, stress and potential.

use strain_tomo::fields::{write_field, Grid2};
use strain_tomo::phantoms::{airy_potential, AirySpec};

fn main() -> strain_tomo::Result<()> {
    let spec = AirySpec::standard().with_grid(Grid2::square(200, 1.2)?);
    let strain = spec.strain();
    let psi = airy_potential(&spec);
    println!(
        "grid {}x{}, max |eps|_F {:.4}, max |psi| {:.4}",
        spec.grid.nx,
        spec.grid.ny,
        strain.max_frobenius(),
        psi.max_abs()
    );

    let out = std::env::temp_dir().join("strain-tomo-airy");
    std::fs::create_dir_all(&out).map_err(|e| strain_tomo::Error::Io { path: out.clone(), source: e })?;
    write_field(strain, out.join("strain.stf"))?;
    write_field(spec.stress(), out.join("stress.stf"))?;
    write_field(psi, out.join("psi.stf"))?;
    println!("wrote {}", out.display());
    Ok(())
}
