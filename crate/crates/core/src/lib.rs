pub mod groebner;
pub mod poly;
pub mod presentations;
pub mod group_oracle;
pub mod invariants;
pub mod verifier;
