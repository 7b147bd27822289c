//! The batch front end driven from code: parse a `key = value` document,
//! render the result table, and show how every config error is reported
//! at once.
//!
//! ```text
//! cargo run --example batch_config
//! ```

use lemonlab::cli::{parse_config, render};

fn main() {
    let doc = "\
command  = sweep
dist     = uniform(0,1)
mu_grid  = 0.2, 0.4, 0.6, 0.8
regime   = two_period
";
    let cfg = parse_config(doc).expect("valid document");
    print!("{}", render(&cfg).expect("sweep succeeds").main);

    let broken = "dist = uniform(1,0)\nmu = 1.5\nregime = two_period\ncolour = red\n";
    match parse_config(broken) {
        Ok(_) => unreachable!(),
        Err(errs) => {
            println!("\n{} problems:", errs.0.len());
            for e in errs.0 {
                println!("  {e}");
            }
        }
    }
}
