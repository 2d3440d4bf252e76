//! Path-averaged strain on golden-ratio angles, as a diffraction instrument
//! would report it, run through the reconstruct command.

use strain_tomo::fields::io::write_mask_csv;
use strain_tomo::fields::{write_field, Grid2, Mask2};
use strain_tomo::lrt::{golden_angles, lrt_forward, lrt_to_average, write_sinogram_csv, DetectorSpec, SinogramKind};
use strain_tomo::phantoms::AirySpec;
use strain_tomo::pipeline::{run, RunConfig, Subcommand};

fn main() -> strain_tomo::Result<()> {
    let dir = std::env::temp_dir().join("strain-tomo-measured");
    std::fs::create_dir_all(&dir).map_err(|e| strain_tomo::Error::Io { path: dir.clone(), source: e })?;
    let spec = AirySpec::standard().with_grid(Grid2::square(200, 1.2)?);
    let mask = Mask2::disk(spec.grid, 0.0, 0.0, 1.0)?;

    let lrt = lrt_forward(&spec.strain(), &golden_angles(50, 0.0)?, &DetectorSpec::for_grid(&spec.grid))?;
    write_sinogram_csv(&lrt_to_average(&lrt, &mask)?, dir.join("average.csv"))?;
    write_mask_csv(&mask, dir.join("mask.csv"))?;
    write_field(spec.strain(), dir.join("truth.stf"))?;

    let mut c = RunConfig::new(Subcommand::Reconstruct, dir.join("out"));
    c.input = Some(dir.join("average.csv"));
    c.input_kind = SinogramKind::AverageStrain;
    c.mask = Some(dir.join("mask.csv"));
    c.reference = Some(dir.join("truth.stf"));
    let manifest = run(&c)?;
    println!("{}", serde_json::to_string_pretty(&manifest.metrics["report"]["hooke"]).unwrap_or_default());
    Ok(())
}
