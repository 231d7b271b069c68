pub mod certificate;
pub mod embed;
pub mod expander;
pub mod metric;
pub mod plot;
