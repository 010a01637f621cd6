pub mod criteria;
pub mod gapver;
pub mod profiles;
pub mod scalars;
pub mod tuner;
pub mod weight_oracle;
