#![allow(dead_code)]

pub mod enumerate;
pub mod gen;
pub mod lts_oracle;
pub mod reduction_oracle;
