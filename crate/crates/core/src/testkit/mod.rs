//! Instance generators and brute-force oracles for tests and stress runs.

pub mod generate;
pub mod oracle;

pub use generate::{
    all_tournaments, default_middle, gen_counterexample, gen_random, gen_semicomplete, random_path, Counterexample,
    Enforce, Family, GenSpec,
};
pub use oracle::{
    brute_cut_arcs, brute_is_k_arc_strong, brute_is_strong, brute_is_two_strong, natural_chain_holds, oracle_good_pair,
    oracle_nice_decompositions, oracle_sad, DEFAULT_ORACLE_BOUND,
};
