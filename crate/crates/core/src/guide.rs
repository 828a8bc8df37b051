//! Doc-test shims for the book.
//!
//! Each chapter of the mdbook guide is included as a rustdoc comment so
//! `cargo test --doc` compiles and runs every fenced Rust snippet in the
//! book. Keeping the chapters here is what keeps the book honest.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        pub mod $name {}
    };
}

chapter!(ch01_overview, "../../../book/src/overview.md");
chapter!(ch02_spectral, "../../../book/src/spectral-systems.md");
chapter!(ch03_born, "../../../book/src/born-oracle.md");
chapter!(ch04_phases, "../../../book/src/phase-ensemble.md");
chapter!(ch05_monte_carlo, "../../../book/src/monte-carlo.md");
chapter!(ch06_lattice, "../../../book/src/free-particle-lattice.md");
chapter!(ch07_numerics, "../../../book/src/numeric-kernel.md");
