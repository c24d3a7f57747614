//! Drive the experiment runner from code instead of the CLI.
//!
//! Builds a config from an inline TOML string, runs it on two workers, and
//! prints the bound rows. The emitted files land in a scratch directory:
//! `report.json` (full structure, 17-significant-digit floats), `bounds.csv`
//! (one row per bound), and one `.tsv` per plot series.

use sublab::report::{emit, run, EmitFormat, ExperimentConfig};

const CONFIG: &str = r#"
[scenario]
name = "warped_product"

[scenario.params]
b = 0.3
shift = 0.2

[[experiments]]
kind = "tensors"
grid = [8, 8]

[[experiments]]
kind = "bounds"

[[experiments]]
kind = "rescale"
grid = [4, 4]
random_probes = 8
seed = 42
"#;

fn main() -> sublab::Result<()> {
    let config = ExperimentConfig::from_toml_str(CONFIG)?;
    let report = run(&config, 2)?;

    for experiment in &report.experiments {
        println!("{} ({})", experiment.name, if experiment.pass() { "ok" } else { "FAIL" });
        for bound in &experiment.bounds {
            println!(
                "  {:<28} lhs {:>12.5e}  rhs {:>12.5e}  pass {}",
                bound.name, bound.lhs, bound.rhs, bound.pass
            );
        }
    }
    println!("all pass: {}", report.all_pass);

    let out = std::env::temp_dir().join("sublab_run_config_demo");
    for path in emit(&report, EmitFormat::All, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
