//! Serialization helpers shared by verdicts and run reports.

use num_bigint::BigUint;
use serde::Serializer;

/// Big numbers are written as plain decimal strings, never in scientific notation.
pub fn big_as_string<S: Serializer>(value: &BigUint, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_str_radix(10))
}

/// Quotes a `key=value` field when it contains whitespace, quotes or `=`.
pub fn kv_value(value: &str) -> String {
    if value.is_empty() || value.contains(|c: char| c.is_whitespace() || c == '"' || c == '=') {
        format!("{value:?}")
    } else {
        value.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(kv_value("S(4)"), "S(4)");
        assert_eq!(kv_value("a b"), "\"a b\"");
        assert_eq!(kv_value(""), "\"\"");
    }
}
