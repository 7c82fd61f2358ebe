//! Acceptance suite for `motint`. Run it with
//! `cargo test -p motint-validation --test acceptance`; it prints one
//! PASS/FAIL line per criterion and exits non-zero if any criterion fails.
