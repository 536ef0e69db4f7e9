use std::fmt;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_TOLERANCE: u8 = 4;
pub const EXIT_NUMERICAL: u8 = 5;

/// An error message paired with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }

    pub fn tolerance(message: impl Into<String>) -> Self {
        Self { code: EXIT_TOLERANCE, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Extension for core results: numerical failures always exit 5, anything
/// else gets the code of the stage it happened in.
pub trait Stage<T> {
    fn usage(self) -> Result<T, Failure>;
    fn input(self) -> Result<T, Failure>;
}

fn classify(e: specdim::Error, code: u8) -> Failure {
    let code = if e.is_numerical() { EXIT_NUMERICAL } else { code };
    Failure { code, message: e.to_string() }
}

impl<T> Stage<T> for specdim::Result<T> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| classify(e, EXIT_USAGE))
    }

    fn input(self) -> Result<T, Failure> {
        self.map_err(|e| classify(e, EXIT_INPUT))
    }
}
