//! Holds the `acceptance` test target, which checks kmat-core against its
//! numerical acceptance criteria and prints one PASS/FAIL line for each.
//! It lives in its own package so that `cargo test --workspace` runs every
//! other suite before it.
