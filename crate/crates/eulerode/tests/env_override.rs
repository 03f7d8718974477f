//! EULERODE_MAX_ORDER feeds the solve default. This lives in its own test
//! binary because it mutates the process environment.

use eulerode::cli::run;

#[test]
fn env_var_overrides_default_order() {
    // EULERODE_MAX_ORDER feeds the default; an explicit flag still wins.
    std::env::set_var("EULERODE_MAX_ORDER", "6");
    let out = run(["eulerode", "solve", "x^2*d^2 + 2*E*x^2 - x^4", "--lambda", "0"]);
    std::env::remove_var("EULERODE_MAX_ORDER");
    assert_eq!(out.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(doc["meta"]["max_order"], 6);
    assert_eq!(doc["meta"]["truncation"]["limit"], 6);
}
