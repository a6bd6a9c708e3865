//! Oracles, instance generators and exhaustive enumeration used by the
//! test suites and the `gen`/`oracle`/`check-theorems` commands.

pub mod oracle;
pub mod enumerate;
pub mod generate;
pub mod theorems;
