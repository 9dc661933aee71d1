//! Regenerate the bundled synthetic quarterly series on stdout:
//!
//! ```text
//! cargo run -p copbreak --example generate_dataset > data/gdp_synthetic.csv
//! ```
//!
//! The output is deterministic (seed 42); `tests/dataset.rs` pins the
//! committed file to this generator byte for byte.

use copbreak::synthetic::{gdp_like_series, series_to_csv};

fn main() {
    print!("{}", series_to_csv(&gdp_like_series(42)));
}
