pub mod grading;
pub mod rings;
pub mod snf;
pub mod ss;
pub mod diagram;
pub mod table;
pub mod verify;
