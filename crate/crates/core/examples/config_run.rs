//! Drive a run from TOML text, as the command-line tool does, and list the
//! files it writes.

use exciton_chain::io::{self, Command, RunOptions};

const CONFIG: &str = r#"
[chain]
n_sites = 6
dipole_angle_deg = 90.0

[layout]
occupancy = "111_0_11"

[observation]
unit = "lattice"
points = [[0.0, 0.0, 200.0], [100.0, 0.0, 200.0]]

[time]
lifetimes = 3.0
n_points = 50
"#;

fn main() {
    let cfg = match io::parse_config(CONFIG) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    let out = std::env::temp_dir().join("exciton-chain-config-run");
    for command in [Command::Modes, Command::Trace] {
        let opts = RunOptions {
            out_dir: out.join(command.name()),
            threads: Some(2),
            ..RunOptions::from_config(&cfg)
        };
        match io::run(&cfg, command, &opts) {
            Ok(report) => {
                for f in report.files {
                    println!("{}: {}", command.name(), f.display());
                }
                for w in report.warnings {
                    println!("warning: {w}");
                }
            }
            Err(e) => {
                eprintln!("{e}");
                std::process::exit(e.exit_code());
            }
        }
    }
}
