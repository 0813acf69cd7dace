//! Run the seeded validation suites programmatically and print their JSON
//! reports; identical configuration and seed yield byte-identical output.

use graver_forge::matroid::FieldSpec;
use graver_forge::validate::{run_suite, SuiteConfig, SUITES};

fn main() {
    println!("available suites: {}", SUITES.join(" "));

    let cfg = SuiteConfig { seed: 7, count: 20, field: FieldSpec::Rationals };
    for name in ["tdP", "equiv", "graver"] {
        let out = run_suite(name, &cfg).unwrap();
        println!("{}", out.to_json());
        assert!(out.pass());
    }

    // determinism: same config, same bytes
    let a = run_suite("tdP", &cfg).unwrap().to_json().to_string();
    let b = run_suite("tdP", &cfg).unwrap().to_json().to_string();
    assert_eq!(a, b);
    println!("reports are byte-identical across reruns");
}
