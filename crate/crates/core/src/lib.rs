pub mod families;
pub mod groups;
pub mod holomorph;
pub mod enumerate;
pub mod braces;
pub mod ybe;
pub mod catalog;
pub mod report;
