pub mod cgg;
pub mod cli;
pub mod crt;
pub mod eqvlat;
pub mod json;
pub mod newton;
pub mod ultra;
