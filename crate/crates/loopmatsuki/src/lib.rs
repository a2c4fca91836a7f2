pub mod birkhoff;
pub mod bundles;
pub mod canonical;
pub mod duality;
pub mod dvr;
pub mod error;
pub mod group;
pub mod io;
pub mod iwahori;
pub mod laurent;
pub mod matrix;
pub mod ring;
pub mod sample;
pub mod scalar;
pub mod selftest;
pub mod series;
pub mod snf;
pub mod spherical;
