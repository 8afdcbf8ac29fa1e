pub mod algebra;
pub mod codes;
pub mod kc;
pub mod noise;
