pub mod field;
pub mod linalg;
pub mod polyring;
pub mod groebner;
pub mod resolution;
pub mod hsop;
pub mod koszul;
pub mod frobenius;
pub mod oracle;
pub mod pipeline;
