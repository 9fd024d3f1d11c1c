//! A reduced antibunching-depth figure table written as CSV to stdout.

use photon_transport::config::RunConfig;
use photon_transport::figures::{figure, FigureName};

fn main() -> photon_transport::Result<()> {
    let cfg = RunConfig::parse_str("kv0_max = 10\nkv0_points = 3  # coarse\n", "inline")?;
    let table = figure(FigureName::Fig6, &cfg)?;
    table.write_csv(std::io::stdout().lock())
}
