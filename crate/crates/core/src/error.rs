use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FxError {
    #[error("invalid format: width {width}, integer bits {int_bits} (need 1 <= W <= 64, 0 <= I <= W)")]
    InvalidFormat { width: u32, int_bits: u32 },
    #[error("result needs {needed} bits, more than the 64-bit limit")]
    WidthOverflow { needed: u32 },
    #[error("bit index {index} out of range for width {width}")]
    BitIndex { index: u32, width: u32 },
    #[error("complex operands have different formats")]
    FormatMismatch,
}

/// Diagnostic for the line-oriented text inputs. `line` is 1-based, 0 when
/// the error is not tied to a line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", render(*.line, .message))]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn render(line: usize, message: &str) -> String {
    if line == 0 {
        message.to_string()
    } else {
        format!("line {line}: {message}")
    }
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line = line;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExploreError {
    #[error("loop `{0}` is pipelined inside a merged group; pipelining merged loops is not supported")]
    PipelineInMergedGroup(String),
    #[error("unknown loop `{0}`")]
    UnknownLoop(String),
    #[error("loop `{loop_label}` accesses undeclared array `{array}`")]
    UnknownArray { loop_label: String, array: String },
    #[error("invalid directive on `{label}`: {reason}")]
    InvalidDirective { label: String, reason: String },
    #[error("clock period must be positive")]
    InvalidClock,
    #[error(transparent)]
    Width(#[from] FxError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("channel has no taps")]
    NoTaps,
    #[error("worst-case channel output {worst} per dimension reaches the input range limit 0.5")]
    Amplitude { worst: String },
    #[error("noise sigma must be nonnegative")]
    NegativeNoise,
    #[error("symbol code {0} is outside 0..=63")]
    SymbolRange(u32),
}
