pub mod cyclo;
pub mod quat;
pub mod groups3;
pub mod duval;
pub mod recognize;
pub mod isometry;
pub mod fibration;
pub mod singular;
pub mod expected;
