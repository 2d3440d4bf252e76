//! Error against projection count for noisy and noiseless data.

use strain_tomo::pipeline::{noise_sweep, RunConfig, Subcommand};

fn main() -> strain_tomo::Result<()> {
    let mut c = RunConfig::new(Subcommand::NoiseSweep, std::env::temp_dir());
    c.nx = 120;
    c.spacing = 0.02;
    c.noise_sigma_fraction = 0.1;
    c.ladder = vec![25, 50, 100, 200];
    c.floor_projections = 1000;
    let r = noise_sweep(&c)?;
    println!("{:>5} {:>10} {:>10}", "n", "noisy", "noiseless");
    for row in &r.rows {
        println!("{:>5} {:>10.4} {:>10.4}", row.n, row.noisy_error, row.noiseless_error);
    }
    if let Some(fit) = &r.fit {
        println!("slope {:.3} from n = {:?} (floor {:.4})", fit.slope, fit.points, r.floor);
    }
    Ok(())
}
