//! Holds the `acceptance` test target. The suite itself lives in
//! `superperm::acceptance`; this package exists so that the suite runs after
//! the unit and integration tests of the other crates.
