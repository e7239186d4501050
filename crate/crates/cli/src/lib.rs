//! Parsing, formatting and report rendering for the `clifun` binary.

pub mod format;
pub mod parse;

pub use format::{
    blade_name, format_expression, format_mv, format_mv_complex, format_sig, json_number,
    plain_decimal, render_json, JsonReport,
};
pub use parse::{parse_expression, parse_mv, MvExpression, ParseError, Term};
