//! Rerun every acceptance check and print the report.

use modal_succinctness::report::{reproduce, ReproduceOptions};

fn main() {
    let report = reproduce(&ReproduceOptions::default());
    print!("{report}");
    if !report.all_pass() {
        std::process::exit(1);
    }
}
