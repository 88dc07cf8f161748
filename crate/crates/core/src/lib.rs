pub mod bitset;
pub mod boolean;
pub mod catalog;
pub mod cli;
pub mod decompose;
pub mod elementary;
pub mod error;
pub mod group;
pub mod json;
pub mod scan;
pub mod subgroup;
pub mod subset;
pub mod sumset;
pub mod synth;
pub mod theorems;
